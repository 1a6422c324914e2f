"""Memory kernel of a one-dimensional Debye bath and its Laplace transform.

A particle coupled to a line of oscillators with density of states L/(pi v)
up to the cutoff omega_L has the friction kernel

    mu(t) = (m L / 3 pi v) * omega_L^3 * [j_0(omega_L t) - 2 j_2(omega_L t)]

whose transform reduces to elementary functions,

    mu~(p) = (m L / pi v) * [omega_L p - p^2 * atan(omega_L / p)].

The same transform can be routed through the closed forms of the l = 0 and
l = 2 Bessel transforms with the scaling rule L[f(w t)](p) = f~(p/w)/w,
which is what memory_transform_via_closed_form does; the two routes agree
to rounding and serve as mutual checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .closed_form import ClosedFormTransform, evaluate
from .errors import DomainError
from .oracles import sph_bessel_j


@dataclass(frozen=True)
class DebyeParams:
    """Bath parameters: oscillator mass m, line length, sound speed v,
    cutoff frequency omega_l. All strictly positive; no unit system."""

    m: float
    length: float
    v: float
    omega_l: float

    def __post_init__(self):
        for name in ("m", "length", "v", "omega_l"):
            value = getattr(self, name)
            if not (value > 0.0) or math.isinf(value) or math.isnan(value):
                raise DomainError(f"{name} must be a finite positive real, got {value}")


def memory_function(t: float, params: DebyeParams) -> float:
    """mu(t) for t >= 0; at t = 0 this is (mL/3 pi v) omega_L^3."""
    t = float(t)
    if t < 0.0 or math.isnan(t):
        raise DomainError(f"time must be nonnegative, got {t}")
    w = params.omega_l
    pref = params.m * params.length * w**3 / (3.0 * math.pi * params.v)
    x = w * t
    return pref * (sph_bessel_j(0, x) - 2.0 * sph_bessel_j(2, x))


def memory_transform(p: float, params: DebyeParams) -> float:
    """mu~(p) in elementary functions, for p > 0."""
    p = float(p)
    if not (p > 0.0) or math.isinf(p) or math.isnan(p):
        raise DomainError(f"transform argument must be a finite positive real, got {p}")
    w = params.omega_l
    pref = params.m * params.length / (math.pi * params.v)
    return pref * (w * p - p * p * math.atan2(w, p))


def memory_transform_via_closed_form(
    p: float,
    params: DebyeParams,
    cf0: ClosedFormTransform,
    cf2: ClosedFormTransform,
) -> float:
    """mu~(p) routed through the exact l = 0 and l = 2 transforms.

    Uses L[f(w t)](p) = f~(p/w)/w, so
    mu~(p) = (mL/3 pi v) * omega_L^2 * [j0~(q) - 2 j2~(q)] with q = p/omega_L.
    """
    if cf0.l != 0 or cf2.l != 2:
        raise DomainError(
            f"expected the l=0 and l=2 transforms, got l={cf0.l} and l={cf2.l}"
        )
    p = float(p)
    if not (p > 0.0) or math.isinf(p) or math.isnan(p):
        raise DomainError(f"transform argument must be a finite positive real, got {p}")
    w = params.omega_l
    q = p / w
    # 80 output bits so the double-precision rounding of the result is the
    # only loss that survives
    j0_hat = evaluate(cf0, q, out_precision_bits=80).value
    j2_hat = evaluate(cf2, q, out_precision_bits=80).value
    pref = params.m * params.length * w * w / (3.0 * math.pi * params.v)
    return float(pref * (j0_hat - 2.0 * j2_hat))
