"""Random walks on the integers: stochastic UL/LU factorizations, Darboux
transformations, spectral matrices and Karlin-McGregor verification."""

__version__ = "0.1.0"

from .contfrac import closed_form, convergents, limits  # noqa: E402
from .darboux import darboux  # noqa: E402
from .errors import *  # noqa: F401,F403,E402
from .factorization import LOWER, UPPER, assemble_product, factor, factor_lu, factor_ul  # noqa: E402
from .kmcg import oracle_power, simulate, verify  # noqa: E402
from .polynomials import build_q, build_s, build_t, conjugate_family, potentials  # noqa: E402
from .spectral import MatrixMeasure, classify_recurrence, darboux_spectrum, example_spectrum, moment  # noqa: E402
from .walk import TruncatedMatrix, WalkSpec, coeff, truncate  # noqa: E402
from .window import Seq  # noqa: E402

__all__ = [
    "LOWER",
    "UPPER",
    "MatrixMeasure",
    "Seq",
    "TruncatedMatrix",
    "WalkSpec",
    "assemble_product",
    "build_q",
    "build_s",
    "build_t",
    "classify_recurrence",
    "closed_form",
    "coeff",
    "conjugate_family",
    "convergents",
    "darboux",
    "darboux_spectrum",
    "example_spectrum",
    "factor",
    "factor_lu",
    "factor_ul",
    "limits",
    "moment",
    "oracle_power",
    "potentials",
    "simulate",
    "truncate",
    "verify",
    "__version__",
]
