"""Numerical ground truths, independent of the exact closed form.

Two oracles for the transform integral_0^inf j_l(t) exp(-pt) dt:

* adaptive panel quadrature of the defining integral, with panels cut at
  integer multiples of pi (approximate zeros of the oscillation) and an
  analytic tail bound exp(-pT)/p;
* the identity with the Legendre function of the second kind,
  i^(l+1) Q_l(ip), evaluated in complex arithmetic.

Plus a reference double-precision evaluator for j_l itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import gmpy2
import numpy as np

from .errors import (
    DomainError,
    OracleConsistencyError,
    QuadratureConvergenceError,
    UnsupportedOrderError,
)

# ------------------------------------------------------------------ j_l

_RESCALE_LIMIT = 1e250
_CF_MAX_ITER = 20000


def _series_small_t(l: int, t: float) -> float:
    # j_l(t) = t^l/(2l+1)!! * (1 - (t^2/2)/(1!(2l+3)) + ...); used for
    # t^2 < 2l+3 where the terms decrease from the start, which keeps the
    # alternating sum free of cancellation. Prefactor in log space so large
    # l cannot overflow the double factorial.
    log_pref = (
        l * math.log(t)
        - (math.lgamma(2 * l + 2) - l * math.log(2.0) - math.lgamma(l + 1))
    )
    if log_pref < -745.0:
        return 0.0
    pref = math.exp(log_pref)
    total = 1.0
    term = 1.0
    m = 0
    while True:
        term *= -t * t / (2.0 * (m + 1) * (2 * l + 2 * m + 3))
        total += term
        m += 1
        if abs(term) <= 1e-18 * abs(total) or m > 200:
            break
    return pref * total


def _upward(l: int, t: float) -> float:
    jm = math.sin(t) / t
    j = math.sin(t) / (t * t) - math.cos(t) / t
    for k in range(1, l):
        jm, j = j, (2 * k + 1) / t * j - jm
    return j


def _cf1_ratio(l: int, t: float) -> float:
    # continued fraction for j_l/j_{l-1}: t/(2l+1 -) t^2/(2l+3 -) ...
    # evaluated by the modified Lentz scheme
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    numer = t
    denom = float(2 * l + 1)
    for _ in range(_CF_MAX_ITER):
        d = denom + numer * d
        if d == 0.0:
            d = tiny
        c = denom + numer / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return f
        numer = -t * t
        denom += 2.0
    raise OracleConsistencyError(
        f"continued fraction for j_{l}/j_{l - 1} at t={t} did not converge"
    )


def _downward(l: int, t: float) -> float:
    ratio = _cf1_ratio(l, t)
    # descend from (f_l, f_{l-1}) = (ratio, 1) to f_0; the true sequence is
    # proportional, so one anchor value of j_0 or j_1 fixes the scale
    f_hi = ratio
    f_lo = 1.0
    f_l_scaled = ratio
    for k in range(l - 1, 0, -1):
        f_hi, f_lo = f_lo, (2 * k + 1) / t * f_lo - f_hi
        if abs(f_lo) > _RESCALE_LIMIT:
            f_hi *= 1e-250
            f_lo *= 1e-250
            f_l_scaled *= 1e-250
    # now f_lo ~ j_0, f_hi ~ j_1, up to the common scale
    j0 = math.sin(t) / t
    j1 = math.sin(t) / (t * t) - math.cos(t) / t
    if abs(j0) >= abs(j1):
        return f_l_scaled * (j0 / f_lo)
    return f_l_scaled * (j1 / f_hi)


def sph_bessel_j(l: int, t: float) -> float:
    """Spherical Bessel function j_l(t) for l >= 0, t >= 0, double precision.

    Branches: power series while t^2 < 2l+3 (terms decrease from the
    start there, and trigonometric forms would cancel), upward recurrence
    for t >= l, downward recurrence seeded by a continued-fraction ratio
    (Miller's approach) in between, where upward recurrence is unstable.
    """
    if l < 0:
        raise DomainError(f"order must be nonnegative, got {l}")
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"argument must be nonnegative, got {t}")
    if t == 0.0:
        return 1.0 if l == 0 else 0.0
    if l == 0:
        return math.sin(t) / t
    if t * t < 2 * l + 3:
        return _series_small_t(l, t)
    if t >= l:
        return _upward(l, t)
    return _downward(l, t)


# ------------------------------------------------------------ quadrature

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_GL_NODES = tuple(float(x) for x in _GL_NODES)
_GL_WEIGHTS = tuple(float(w) for w in _GL_WEIGHTS)

_DIRECT_PANEL_LIMIT = 128
_ACCEL_MAX_PANELS = 600
_ACCEL_MIN_TERMS = 14
_ACCEL_STREAK = 3
_ACCEL_WINDOW = 48
# above this p the first panel is pre-split on the exp(-pt) decay scale
_LAYER_SPLIT_P = 2.0
_ROUNDING_EPS = 2.0 ** -52


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tolerance: float = 1e-10
    max_subintervals: int = 4096
    tail_cutoff_factor: float = 0.1

    def __post_init__(self):
        if not (self.abs_tolerance > 0.0) or math.isnan(self.abs_tolerance):
            raise DomainError(f"abs_tolerance must be positive, got {self.abs_tolerance}")
        if self.max_subintervals < 8:
            raise DomainError(
                f"max_subintervals must be at least 8, got {self.max_subintervals}"
            )
        if not (0.0 < self.tail_cutoff_factor <= 1.0):
            raise DomainError(
                f"tail_cutoff_factor must be in (0, 1], got {self.tail_cutoff_factor}"
            )


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    subintervals_used: int


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def _gl16(g: Callable[[float], float], a: float, b: float) -> float:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    total = 0.0
    for x, w in zip(_GL_NODES, _GL_WEIGHTS):
        total += w * g(mid + half * x)
    return half * total


def _panel_adaptive(g, a: float, b: float, tol: float, budget: _Budget):
    """Adaptive bisection on one panel: 16-point rule against its two
    halves, split while the difference exceeds the budgeted tolerance.
    Returns (value, error_estimate, subintervals_used); once the global
    budget is gone, remaining intervals are accepted as-is and the error
    estimate carries the shortfall."""
    stack = [(a, b, tol)]
    total = 0.0
    err = 0.0
    used = 0
    while stack:
        a0, b0, tol0 = stack.pop()
        used += 1
        have_budget = budget.spend()
        coarse = _gl16(g, a0, b0)
        mid = 0.5 * (a0 + b0)
        fine = _gl16(g, a0, mid) + _gl16(g, mid, b0)
        delta = abs(fine - coarse)
        if delta <= tol0 or not have_budget or (b0 - a0) <= 1e-12 * (b - a):
            total += fine
            err += delta
        else:
            stack.append((mid, b0, 0.5 * tol0))
            stack.append((a0, mid, 0.5 * tol0))
    return total, err, used


def _first_panel_pieces(p: float):
    """Split [0, pi] geometrically when exp(-pt) forms a boundary layer the
    16-point rule cannot see: rung widths double from 1/(4p) upward, so the
    integrand varies by a bounded factor on each rung."""
    if p <= _LAYER_SPLIT_P:
        return [(0.0, math.pi)]
    bounds = [0.0]
    t = 0.25 / p
    while t < math.pi:
        bounds.append(t)
        t *= 2.0
    bounds.append(math.pi)
    return list(zip(bounds[:-1], bounds[1:]))


def _wynn_epsilon(sums) -> float:
    """Limit estimate for a sequence of partial sums (epsilon algorithm).

    Even columns hold accelerated estimates; the walk stops when a
    difference vanishes or turns non-finite, returning the deepest healthy
    even-column entry."""
    prev = [0.0] * (len(sums) + 1)
    curr = list(sums)
    best = curr[-1]
    col = 0
    while len(curr) > 1 and col < 16:
        nxt = []
        healthy = True
        for j in range(len(curr) - 1):
            d = curr[j + 1] - curr[j]
            if d == 0.0 or not math.isfinite(d):
                healthy = False
                break
            nxt.append(prev[j + 1] + 1.0 / d)
        if not healthy or not nxt:
            break
        prev, curr = curr, nxt
        col += 1
        if col % 2 == 0 and math.isfinite(curr[-1]):
            best = curr[-1]
    return best


def laplace_quadrature(
    f: Callable[[float], float],
    p: float,
    cfg: QuadratureConfig,
    envelope: float = 1.0,
    oscillation_onset: float = 0.0,
) -> OracleResult:
    """integral_0^inf f(t) exp(-pt) dt for oscillatory f with |f| <= envelope.

    Panels of width pi are integrated adaptively and summed in order. The
    panel count comes from the tail bound envelope*exp(-pT)/p; when that
    count is impractically large (small p), the alternating panel series is
    instead accelerated with the epsilon algorithm after the oscillation
    onset.
    """
    if not (p > 0.0) or math.isinf(p) or math.isnan(p):
        raise DomainError(f"transform argument must be a finite positive real, got {p}")
    if envelope <= 0.0:
        raise DomainError(f"envelope must be positive, got {envelope}")

    def g(t: float) -> float:
        w = -p * t
        if w < -745.0:
            return 0.0
        return f(t) * math.exp(w)

    cutoff = cfg.abs_tolerance * cfg.tail_cutoff_factor
    horizon = math.log(envelope / (p * cutoff)) / p
    n_panels = max(1, int(math.ceil(horizon / math.pi)))
    budget = _Budget(cfg.max_subintervals)

    if n_panels <= _DIRECT_PANEL_LIMIT:
        per_panel = cfg.abs_tolerance / (n_panels + 1)
        total = 0.0
        abs_acc = 0.0
        err = envelope * math.exp(-p * n_panels * math.pi) / p
        used = 0
        first = _first_panel_pieces(p)
        for a, b in first:
            v, e, u = _panel_adaptive(g, a, b, per_panel / len(first), budget)
            total += v
            abs_acc += abs(v)
            err += e
            used += u
        for k in range(1, n_panels):
            v, e, u = _panel_adaptive(g, k * math.pi, (k + 1) * math.pi, per_panel, budget)
            total += v
            abs_acc += abs(v)
            err += e
            used += u
        # summation and per-node rounding never resolve better than this
        err += 16.0 * _ROUNDING_EPS * abs_acc
        result = OracleResult(value=total, error_estimate=err, subintervals_used=used)
        if budget.left <= 0 and err > cfg.abs_tolerance:
            raise QuadratureConvergenceError(
                f"subinterval budget {cfg.max_subintervals} exhausted with error "
                f"estimate {err:.3e} above tolerance {cfg.abs_tolerance:.3e}",
                partial=result,
            )
        return result

    # Accelerated path. Head panels up to the oscillation onset are summed
    # directly; past the onset the panel integrals alternate in sign, so the
    # partial sums form an alternating series the epsilon table extrapolates.
    k0 = max(1, int(math.ceil(oscillation_onset / math.pi)))
    per_panel = cfg.abs_tolerance / (8 * (k0 + _ACCEL_MIN_TERMS))
    total = 0.0
    err_panels = 0.0
    used = 0
    for k in range(k0):
        v, e, u = _panel_adaptive(g, k * math.pi, (k + 1) * math.pi, per_panel, budget)
        total += v
        err_panels += e
        used += u

    sums = []
    estimates = []
    agree_streak = 0
    k = k0
    while k < k0 + _ACCEL_MAX_PANELS:
        v, e, u = _panel_adaptive(g, k * math.pi, (k + 1) * math.pi, per_panel, budget)
        total += v
        err_panels += e
        used += u
        sums.append(total)
        k += 1
        if len(sums) < _ACCEL_MIN_TERMS:
            continue
        est = _wynn_epsilon(sums[-_ACCEL_WINDOW:])
        estimates.append(est)
        if len(estimates) >= 2:
            step = abs(estimates[-1] - estimates[-2])
            if step <= 0.25 * cfg.abs_tolerance:
                agree_streak += 1
                if agree_streak >= _ACCEL_STREAK:
                    # extrapolated results are not claimed tighter than
                    # half the configured tolerance
                    recent = [
                        abs(estimates[-i] - estimates[-i - 1])
                        for i in range(1, _ACCEL_STREAK + 1)
                    ]
                    err = err_panels + 4.0 * max(recent) + 0.5 * cfg.abs_tolerance
                    return OracleResult(
                        value=estimates[-1],
                        error_estimate=err,
                        subintervals_used=used,
                    )
            else:
                agree_streak = 0
        if budget.left <= 0:
            break

    best = estimates[-1] if estimates else total
    spread = (
        abs(estimates[-1] - estimates[-2]) if len(estimates) >= 2 else abs(best)
    )
    partial = OracleResult(
        value=best,
        error_estimate=err_panels + 4.0 * spread,
        subintervals_used=used,
    )
    raise QuadratureConvergenceError(
        f"accelerated panel series did not settle within budget at p={p}",
        partial=partial,
    )


def quadrature_transform(
    l: int, p: float, cfg: Optional[QuadratureConfig] = None
) -> OracleResult:
    """First oracle: direct quadrature of integral_0^inf j_l(t) exp(-pt) dt."""
    if l < 0:
        raise DomainError(f"order must be nonnegative, got {l}")
    if cfg is None:
        cfg = QuadratureConfig()
    # |j_l| <= 1 everywhere; oscillation settles past the turning point t ~ l
    return laplace_quadrature(
        lambda t: sph_bessel_j(l, t),
        float(p),
        cfg,
        envelope=1.0,
        oscillation_onset=float(l) + 5.0,
    )


# ------------------------------------------------- Legendre second kind

LEGENDRE_MAX_ORDER = 40
_IMAG_RESIDUAL_LIMIT = 1e-10


def legendre_q_oracle(l: int, p: float) -> float:
    """Second oracle: real part of i^(l+1) Q_l(ip).

    Q_0(z) = log((z+1)/(z-1))/2 on the principal branch, Q_1 = z Q_0 - 1,
    then the forward recurrence. On the imaginary axis the recurrence loses
    roughly 2*log2(p + sqrt(1+p^2)) bits per order, so the working
    precision carries a matching reserve; orders past LEGENDRE_MAX_ORDER
    are declined.
    """
    if l < 0:
        raise DomainError(f"order must be nonnegative, got {l}")
    if l > LEGENDRE_MAX_ORDER:
        raise UnsupportedOrderError(
            f"Legendre-Q oracle supports orders up to {LEGENDRE_MAX_ORDER}, got {l}"
        )
    p = float(p)
    if not (p > 0.0) or math.isinf(p) or math.isnan(p):
        raise DomainError(f"transform argument must be a finite positive real, got {p}")

    growth = p + math.sqrt(1.0 + p * p)
    reserve = int(math.ceil(2.0 * l * math.log2(growth))) if growth > 1.0 else 0
    bits = 96 + max(0, reserve)

    with gmpy2.context(precision=bits):
        z = gmpy2.mpc(0.0, p)
        q_prev = gmpy2.log((z + 1) / (z - 1)) / 2  # Q_0(ip), principal branch
        if l == 0:
            q = q_prev
        else:
            q = z * q_prev - 1  # Q_1
            for k in range(1, l):
                q_prev, q = q, ((2 * k + 1) * z * q - k * q_prev) / (k + 1)
        # multiply by i^(l+1) exactly: swap/negate components
        re, im = q.real, q.imag
        r = (l + 1) % 4
        if r == 0:
            out_re, out_im = re, im
        elif r == 1:
            out_re, out_im = -im, re
        elif r == 2:
            out_re, out_im = -re, -im
        else:
            out_re, out_im = im, -re

    if abs(out_im) > _IMAG_RESIDUAL_LIMIT * abs(out_re):
        raise OracleConsistencyError(
            f"residual imaginary part {float(out_im):.3e} exceeds "
            f"{_IMAG_RESIDUAL_LIMIT} relative to {float(out_re):.3e} at l={l}, p={p}"
        )
    return float(out_re)
