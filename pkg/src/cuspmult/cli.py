"""Command-line interface: ``cuspmult <subcommand> ...``.

Exit codes: 0 success, 1 verification failure (or a violated verdict when
``--fail-on-violation`` is given), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classifier import (
    Assumption,
    Status,
    SubgroupOfUnits,
    XPoint,
    classify,
    orbit,
)
from .cusp_geometry import Cusp, GammaMatrix, cusp_representatives, scaling_matrix, sl2z_index
from .dirichlet import DirichletCharacter, character_order, enumerate_characters
from .multiplicative_kernel import (
    SampleFormatError,
    is_multiplicative,
    parse_sampled_function,
    parse_support_set,
    weak_criterion,
)
from .oracle_suite import CLAIMS, run_all, run_claim
from .residue_arith import ArithmeticDomainError, LevelTooLargeError, check_level, unit_group_structure
from .sl2_finite import GroupSizeError


class UsageError(Exception):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_gamma(text: str) -> GammaMatrix:
    """Four integers ``a,b,c,d`` or a cusp ``a/b`` (or ``oo``) completed by the scaling matrix."""
    text = text.strip()
    if "," in text:
        parts = text.split(",")
        if len(parts) != 4:
            raise UsageError(f"--gamma needs four entries a,b,c,d, got {text!r}")
        try:
            a, b, c, d = (int(p) for p in parts)
        except ValueError:
            raise UsageError(f"--gamma entries must be integers: {text!r}") from None
        return GammaMatrix(a, b, c, d)
    try:
        return scaling_matrix(Cusp.parse(text))
    except ValueError:
        raise UsageError(f"--gamma must be a,b,c,d or a cusp a/b, got {text!r}") from None


def parse_group(text: str, N: int) -> tuple[SubgroupOfUnits | None, Assumption]:
    if text == "full":
        return None, Assumption.FULL_UNITS
    if text == "squares":
        return None, Assumption.SQUARES
    if text.startswith("gens:"):
        body = text[len("gens:"):]
        try:
            gens = tuple(int(g) for g in body.split(",") if g.strip())
        except ValueError:
            raise UsageError(f"bad generator list {body!r}") from None
        return SubgroupOfUnits(N, gens), Assumption.CUSTOM
    raise UsageError(f"--group must be full, squares or gens:g1,g2,..., got {text!r}")


def parse_char(label: str | None, N: int) -> DirichletCharacter:
    if label is None:
        return DirichletCharacter.trivial(N)
    try:
        chi = DirichletCharacter.parse(label)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if chi.modulus != N:
        raise UsageError(f"character {label} has modulus {chi.modulus}, level is {N}")
    return chi


# ---------------------------------------------------------------- subcommands


def cmd_classify(args, out) -> int:
    N = check_level(args.level)
    gamma = parse_gamma(args.gamma)
    chi = parse_char(args.char, N)
    G, assumption = parse_group(args.group, N)
    verdict = classify(N, chi, gamma, G, assumption)
    if args.json:
        out.write(dump_json(verdict.to_json()))
    else:
        inv = verdict.invariants
        out.write(f"level      {N}\n")
        out.write(f"gamma      {gamma}\n")
        out.write(f"character  {chi.label}\n")
        out.write(f"group      {assumption.value} {list(verdict.group)}\n")
        out.write(f"verdict    {verdict.status.value}\n")
        out.write(
            f"invariants N1={inv.N1} M={inv.M} M1={inv.M1} N3={inv.N3} "
            f"width={inv.width} mu={inv.mu}\n"
        )
        out.write(f"orbit      {verdict.orbit_size} points, {verdict.orbit_projective_size} projective\n")
        for e in verdict.evidence:
            out.write(f"  [{'holds' if e.holds else 'fails'}] {e.tag}: {e.fact}\n")
    if args.fail_on_violation and verdict.status is Status.VIOLATED:
        return 1
    return 0


def cmd_cusps(args, out) -> int:
    N = check_level(args.level)
    chi = parse_char(args.char, N)
    rows = cusp_representatives(N, chi)
    total = sum(r.width for r in rows)
    if args.json:
        out.write(dump_json({
            "level": N,
            "character": chi.label,
            "index": sl2z_index(N),
            "cusps": [
                {
                    "cusp": str(r.cusp),
                    "gamma": _gamma_list(scaling_matrix(r.cusp)),
                    "width": r.width,
                    "M": r.M,
                    "N3": r.n3,
                    "mu": str(r.mu),
                }
                for r in rows
            ],
        }))
        return 0
    out.write(f"{'cusp':>8} {'gamma':>16} {'width':>6} {'M':>5} {'N3':>5} {'mu':>6}\n")
    for r in rows:
        g = scaling_matrix(r.cusp)
        out.write(f"{str(r.cusp):>8} {str(g):>16} {r.width:>6} {r.M:>5} {r.n3:>5} {str(r.mu):>6}\n")
    out.write(f"{len(rows)} cusps; widths sum to {total} = index {sl2z_index(N)}\n")
    return 0


def _gamma_list(g: GammaMatrix) -> list[int]:
    return [g.a, g.b, g.c, g.d]


def cmd_characters(args, out) -> int:
    N = check_level(args.level)
    ring = unit_group_structure(N)
    chars = enumerate_characters(N)
    rows = [
        {
            "label": chi.label,
            "order": character_order(chi),
            "angles": [str(t) for t in chi.angles],
        }
        for chi in chars
    ]
    if args.json:
        out.write(dump_json({
            "level": N,
            "generators": list(ring.generators),
            "generator_orders": list(ring.orders),
            "characters": rows,
        }))
        return 0
    out.write(f"unit group mod {N}: generators {list(ring.generators)} of orders {list(ring.orders)}\n")
    for r in rows:
        out.write(f"{r['label']:<24} order {r['order']:<4} angles {', '.join(r['angles'])}\n")
    return 0


def cmd_orbit(args, out) -> int:
    N = check_level(args.level)
    try:
        c, d = (int(t) for t in args.point.split(","))
    except ValueError:
        raise UsageError(f"--point must be c,d, got {args.point!r}") from None
    x = XPoint(c, d, N)
    G, assumption = parse_group(args.group, N)
    if G is None:
        G = SubgroupOfUnits.full(N) if assumption is Assumption.FULL_UNITS else SubgroupOfUnits.squares(N)
    orb = orbit(x, G)
    pts = [list(p) for p in orb.pairs]
    if args.json:
        out.write(dump_json({
            "level": N,
            "point": [x.c, x.d],
            "group": G.elements(),
            "orbit": pts,
            "size": len(orb),
            "projective_size": orb.projective_size,
        }))
        return 0
    out.write(f"orbit of ({x.c}, {x.d}) mod {N} under {G.elements()}\n")
    out.write(" ".join(f"({c},{d})" for c, d in pts) + "\n")
    out.write(f"{len(orb)} points, {orb.projective_size} projective classes\n")
    return 0


def cmd_verify(args, out) -> int:
    if args.claim is not None and args.claim not in CLAIMS:
        raise UsageError(f"unknown claim {args.claim!r}; choose from {', '.join(CLAIMS)}")
    reports = run_claim(args.claim, args.max_level) if args.claim else run_all(args.max_level)
    ok = all(r.passed for r in reports)
    if args.json:
        out.write(dump_json({
            "pass": ok,
            "reports": [r.to_json(timings=args.timings) for r in reports],
        }))
    else:
        for r in reports:
            line = r.line()
            if args.timings:
                line += f" [{r.runtime:.2f}s]"
            out.write(line + "\n")
        out.write(f"{sum(r.passed for r in reports)}/{len(reports)} passed\n")
    return 0 if ok else 1


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_checkfn(args, out) -> int:
    N = check_level(args.level)
    h = parse_sampled_function(_read(args.path), N)
    if args.mode == "weak":
        if args.support is None:
            raise UsageError("--mode weak needs --support FILE")
        S = parse_support_set(_read(args.support), N)
        result = weak_criterion(h, S)
    else:
        result = is_multiplicative(h)
    witness = None if result.witness is None else [str(q) for q in result.witness]
    if args.json:
        out.write(dump_json({
            "mode": args.mode,
            "points": len(h),
            "checked": result.checked,
            "pass": result.holds,
            "witness": witness,
        }))
    else:
        status = "pass" if result.holds else "FAIL"
        out.write(f"{args.mode}: {status} ({result.checked} quadruples on {len(h)} points)\n")
        if witness:
            a1, a2, b1, b2 = witness
            out.write(f"witness a1={a1} a2={a2} b1={b1} b2={b2}\n")
    return 0 if result.holds else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cuspmult", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, level=True):
        if level:
            sp.add_argument("--level", "-N", type=int, required=True, help="level N")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("classify", help="verdict for (N, chi, gamma)")
    common(sp)
    sp.add_argument(
        "--gamma", required=True,
        help="a,b,c,d or a cusp a/b; write --gamma=-1,0,0,-1 when the first entry is negative",
    )
    sp.add_argument("--char", help="character label such as 8:[1,0]; trivial by default")
    sp.add_argument("--group", default="full", help="full, squares or gens:g1,g2,...")
    sp.add_argument("--fail-on-violation", action="store_true",
                    help="exit 1 when the verdict is NecessaryViolated")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("cusps", help="cusp representatives of Gamma_0(N)")
    common(sp)
    sp.add_argument("--char", help="character label for the cusp parameters")
    sp.set_defaults(func=cmd_cusps)

    sp = sub.add_parser("characters", help="Dirichlet characters mod N")
    common(sp)
    sp.set_defaults(func=cmd_characters)

    sp = sub.add_parser("orbit", help="orbit of (c, d) under a unit subgroup")
    common(sp)
    sp.add_argument("--point", required=True, help="c,d")
    sp.add_argument("--group", default="full", help="full, squares or gens:g1,g2,...")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("verify", help="re-derive the finite claims by brute force")
    common(sp, level=False)
    sp.add_argument("--claim", help=f"one of: {', '.join(CLAIMS)}")
    sp.add_argument("--max-level", type=int, help="cap the levels swept")
    sp.add_argument("--timings", action="store_true", help="include runtimes (not deterministic)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("checkfn", help="quadruple criterion on a sampled function file")
    sp.add_argument("path", help="file of lines '<point> <magnitude> <angle>'")
    common(sp)
    sp.add_argument("--mode", choices=("strict", "weak"), default="strict")
    sp.add_argument("--support", help="support set file (weak mode)")
    sp.set_defaults(func=cmd_checkfn)
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ArithmeticDomainError, LevelTooLargeError, SampleFormatError,
            GroupSizeError, ValueError) as exc:
        err.write(f"cuspmult {args.command}: error: {exc}\n")
        return 2


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
