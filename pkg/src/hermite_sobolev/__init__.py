"""High-precision Hermite-Sobolev orthogonal polynomials, their Mehler-Heine limits and zeros."""

from .bessel import (
    EVEN_BOTH,
    EVEN_GAP,
    EVEN_MASS,
    HERMITE_EVEN,
    HERMITE_ODD,
    ODD_BOTH,
    ODD_GAP,
    ODD_MASS,
    LimitFunctionId,
    bessel_j,
    bessel_zero,
    limit_function,
    limit_zeros,
)
from .errors import (
    BracketError,
    CertificationError,
    DomainError,
    HermiteSobolevError,
    InternalConsistencyError,
    PrecisionInsufficient,
    PrecisionMismatch,
    UncoveredCase,
    UnsupportedCase,
)
from .hermite_core import Poly, hermite_at_zero, hermite_coefficients, hermite_monic, hermite_norm_sq
from .kernels import KernelQuery, kernel_cd, kernel_closed_at0, kernel_const, kernel_sum, kernel_taylor_general
from .mehler_heine import ScaledFamily, conjecture_probe, mh_report, scaled_eval, select_limit
from .qlambda import TwoByTwoCase, coeff_limit_report, connection_coeffs, delta, q_poly
from .real import default_precision, set_default_precision, working_precision
from .sobolev_gram import MassMatrix, SobolevProduct, WeightSpec, gram_orthogonalize, gram_orthogonalize_exact
from .symmetrize import laguerre_sobolev_poly, mass_map, symmetrization_residual
from .zeros import family_zeros, hermite_zeros, interlace_check, real_zeros, zero_asymptotics_report

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
