"""invint: integrate inverse functions in closed form, then prove it numerically.

Given a continuous strictly monotone f on a finite interval and an
antiderivative F of f, the package evaluates

    G(y) = y * finv(y) - F(finv(y)) + C

by pointwise numerical inversion only, and cross-checks the identity
against an adaptive quadrature oracle, a swapped-order region integral,
and a Stieltjes change-of-variable / integration-by-parts route.
"""

from .errors import (
    BVRequired,
    DomainError,
    InvalidAntiderivative,
    InvintError,
    MaxSubdivision,
    NoConvergence,
    NonMonotone,
    OutOfCodomain,
    ParseError,
    UnboundVariable,
    UnknownVariable,
)
from .expr import Expression, differentiate, evaluate, parse
from .laisant import (
    FubiniCheck,
    InverseAntiderivative,
    VerificationReport,
    definite_inverse_integral,
    fubini_region_check,
    generalized_inverse_integral,
    inverse_antiderivative,
    verify,
)
from .monotone import (
    IntervalDomain,
    InverseFunction,
    MonotoneFunction,
    build,
    inverse_as_function,
    invert,
)
from .quadrature import (
    Antiderivative,
    QuadratureResult,
    antiderivative_at,
    integrate,
    verify_exact_antiderivative,
)
from .stieltjes import (
    RefinementScheme,
    StieltjesResult,
    change_of_variable_pair,
    ibp_residual,
    rs_integral,
    rs_integral_detailed,
    screen_integrator,
)

__version__ = "0.1.0"

__all__ = [
    "Antiderivative",
    "BVRequired",
    "DomainError",
    "Expression",
    "FubiniCheck",
    "IntervalDomain",
    "InvalidAntiderivative",
    "InverseAntiderivative",
    "InverseFunction",
    "InvintError",
    "MaxSubdivision",
    "MonotoneFunction",
    "NoConvergence",
    "NonMonotone",
    "OutOfCodomain",
    "ParseError",
    "QuadratureResult",
    "RefinementScheme",
    "StieltjesResult",
    "UnboundVariable",
    "UnknownVariable",
    "VerificationReport",
    "antiderivative_at",
    "build",
    "change_of_variable_pair",
    "definite_inverse_integral",
    "differentiate",
    "evaluate",
    "fubini_region_check",
    "generalized_inverse_integral",
    "ibp_residual",
    "integrate",
    "inverse_antiderivative",
    "inverse_as_function",
    "invert",
    "parse",
    "rs_integral",
    "rs_integral_detailed",
    "screen_integrator",
    "verify",
    "verify_exact_antiderivative",
    "__version__",
]
