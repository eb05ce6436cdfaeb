"""Exact complex numbers of the form r * e^{2 pi i t} with r, t rational."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def wrap_angle(t) -> Fraction:
    """Reduce a rational angle into [0, 1)."""
    t = Fraction(t)
    return t - (t.numerator // t.denominator)


@dataclass(frozen=True)
class PolarValue:
    """Zero, or a positive rational magnitude times a root of unity.

    Canonical form: zero is ``magnitude == 0`` with ``angle == 0``; otherwise the
    angle lies in [0, 1). Equality is structural.
    """

    magnitude: Fraction = Fraction(1)
    angle: Fraction = Fraction(0)

    def __post_init__(self):
        mag = Fraction(self.magnitude)
        if mag < 0:
            raise ValueError("magnitude must be nonnegative; encode signs in the angle")
        object.__setattr__(self, "magnitude", mag)
        object.__setattr__(self, "angle", Fraction(0) if mag == 0 else wrap_angle(self.angle))

    @classmethod
    def zero(cls) -> "PolarValue":
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def one(cls) -> "PolarValue":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def unit(cls, angle) -> "PolarValue":
        return cls(Fraction(1), angle)

    @classmethod
    def from_rational(cls, x) -> "PolarValue":
        x = Fraction(x)
        if x == 0:
            return cls.zero()
        return cls(abs(x), Fraction(1, 2) if x < 0 else Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.magnitude == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __mul__(self, other: "PolarValue") -> "PolarValue":
        if not isinstance(other, PolarValue):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return PolarValue.zero()
        return PolarValue(self.magnitude * other.magnitude, self.angle + other.angle)

    def inverse(self) -> "PolarValue":
        if self.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        return PolarValue(1 / self.magnitude, -self.angle)

    def __truediv__(self, other: "PolarValue") -> "PolarValue":
        if not isinstance(other, PolarValue):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int) -> "PolarValue":
        if self.is_zero:
            if k <= 0:
                raise ZeroDivisionError("nonpositive power of zero")
            return self
        return PolarValue(self.magnitude**k, self.angle * k)

    def to_rational(self) -> Fraction | None:
        """The value as a rational when it is real, else ``None``."""
        if self.is_zero:
            return Fraction(0)
        if self.angle == 0:
            return self.magnitude
        if self.angle == Fraction(1, 2):
            return -self.magnitude
        return None

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.magnitude}*e(2pi i*{self.angle})"

    def to_json(self) -> dict:
        return {"magnitude": str(self.magnitude), "angle": str(self.angle)}
