"""Extremal Chebyshev-Blaschke products and a sharp distortion bound for
finite Blaschke products, with a numerical verification harness."""

from .blaschke import (
    BlaschkeProduct,
    CriticalData,
    LemniscateProbe,
    critical_points,
    derivative,
    evaluate,
    lemniscate_connected,
    lemniscate_probe,
    schwarz_pick,
)
from .chebyshev import (
    Polynomial,
    chebyshev_inverse_branch,
    chebyshev_t,
    chebyshev_t_derivative,
    verify_polynomial_bound,
)
from .elliptic import EllipticPair, Modulus, agm, complete_k, inverse_sn, jacobi_sn, sncndn
from .errors import (
    ChebyBlaschkeError,
    ConsistencyError,
    DomainError,
    NumericError,
    PoleError,
    RangeError,
)
from .extremal import (
    ExtremalProduct,
    build_extremal,
    build_f_ntau,
    dfntau0,
    extremal_derivative,
    extremal_eval,
    inverse_branch,
    solve_tau,
)
from .verify import VerificationReport, check_theorem, random_blaschke
from .zolotarev import ZolotarevParams, solve_modulus, zolotarev_eval

__version__ = "0.1.0"
