"""Exact finite computations around multiplicativity of Fourier coefficients at cusps.

Modules:

- ``residue_arith``: factorization, valuations, unit groups of Z/NZ
- ``sl2_finite``: subgroups of SL(2, Z/NZ) by closure and enumeration
- ``dirichlet``: characters with exact angles
- ``cusp_geometry``: cusps of Gamma_0(N), widths and cusp parameters
- ``multiplicative_kernel``: quadruple criteria on sampled functions
- ``classifier``: verdicts for (N, chi, gamma)
- ``oracle_suite``: brute-force verification of the finite claims
"""

from .classifier import Assumption, Status, SubgroupOfUnits, Verdict, XPoint, classify
from .cusp_geometry import Cusp, GammaMatrix, cusp_representatives, scaling_matrix
from .dirichlet import DirichletCharacter, enumerate_characters
from .multiplicative_kernel import SampledFunction, factorize, is_multiplicative, weak_criterion
from .polar import PolarValue

__version__ = "0.1.0"

__all__ = [
    "Assumption",
    "Cusp",
    "DirichletCharacter",
    "GammaMatrix",
    "PolarValue",
    "SampledFunction",
    "Status",
    "SubgroupOfUnits",
    "Verdict",
    "XPoint",
    "classify",
    "cusp_representatives",
    "enumerate_characters",
    "factorize",
    "is_multiplicative",
    "scaling_matrix",
    "weak_criterion",
]
