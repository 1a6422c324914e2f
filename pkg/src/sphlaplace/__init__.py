"""Exact closed-form Laplace transforms of spherical Bessel functions.

The transform of j_l is P_l(p)*atan(1/p) + Q_{l-1}(p) with exact rational
polynomial coefficients, generated from a recursion on the derivative
expansion of j_l in terms of j_0 = sin(t)/t. The package builds those
polynomials exactly, evaluates them with cancellation-aware precision,
cross-checks them against two independent numerical oracles, applies them
to the Debye-model memory kernel, and times them against quadrature.
"""

from .bench import (
    BenchEntry,
    BenchReport,
    GrowthFit,
    fit_growth,
    report_to_csv,
    report_to_json,
    run_benchmark,
)
from .closed_form import (
    ClosedFormTransform,
    EvalResult,
    build_closed_form,
    cancellation_reserve_bits,
    evaluate,
    j0_derivative_at_zero,
    laplace_j0_derivative,
    recurrence_identity_check,
    render,
)
from .coefficients import (
    CoeffTable,
    DerivativeExpansion,
    c0_closed_form,
    derivative_expansion,
)
from .debye import (
    DebyeParams,
    memory_function,
    memory_transform,
    memory_transform_via_closed_form,
)
from .errors import (
    BenchmarkAgreementError,
    DomainError,
    InsufficientDataError,
    OracleConsistencyError,
    QuadratureConvergenceError,
    UnsupportedOrderError,
)
from .exact import (
    Rational,
    RationalPolynomial,
    double_factorial,
    rational_from_string,
    rational_to_string,
    real_at,
)
from .oracles import (
    LEGENDRE_MAX_ORDER,
    OracleResult,
    QuadratureConfig,
    laplace_quadrature,
    legendre_q_oracle,
    quadrature_transform,
    sph_bessel_j,
)

__version__ = "0.1.0"

__all__ = [
    "BenchEntry",
    "BenchReport",
    "BenchmarkAgreementError",
    "ClosedFormTransform",
    "CoeffTable",
    "DebyeParams",
    "DerivativeExpansion",
    "DomainError",
    "EvalResult",
    "GrowthFit",
    "InsufficientDataError",
    "LEGENDRE_MAX_ORDER",
    "OracleConsistencyError",
    "OracleResult",
    "QuadratureConfig",
    "QuadratureConvergenceError",
    "Rational",
    "RationalPolynomial",
    "UnsupportedOrderError",
    "build_closed_form",
    "c0_closed_form",
    "cancellation_reserve_bits",
    "derivative_expansion",
    "double_factorial",
    "evaluate",
    "fit_growth",
    "j0_derivative_at_zero",
    "laplace_j0_derivative",
    "laplace_quadrature",
    "legendre_q_oracle",
    "memory_function",
    "memory_transform",
    "memory_transform_via_closed_form",
    "quadrature_transform",
    "rational_from_string",
    "rational_to_string",
    "real_at",
    "recurrence_identity_check",
    "render",
    "report_to_csv",
    "report_to_json",
    "run_benchmark",
    "sph_bessel_j",
    "__version__",
]
