"""Acceptance gate: the eight headline guarantees of this package.

Each test function is one guarantee; `pytest -v` therefore prints one
pass/fail line per guarantee. Tolerances and runtime ceilings are part of
the contract and are asserted, not logged.
"""

import math
import time
from fractions import Fraction

import pytest

from sphlaplace.bench import fit_growth, run_benchmark
from sphlaplace.closed_form import (
    build_closed_form,
    evaluate,
    recurrence_identity_check,
)
from sphlaplace.coefficients import CoeffTable, c0_closed_form
from sphlaplace.debye import (
    DebyeParams,
    memory_function,
    memory_transform,
    memory_transform_via_closed_form,
)
from sphlaplace.errors import QuadratureConvergenceError
from sphlaplace.exact import double_factorial
from sphlaplace.oracles import (
    QuadratureConfig,
    laplace_quadrature,
    legendre_q_oracle,
    quadrature_transform,
    sph_bessel_j,
)

UNIT = DebyeParams(m=1.0, length=1.0, v=1.0, omega_l=1.0)


def test_1_known_closed_forms_are_exact(table60):
    """Hand-checked transforms and coefficient rows, bit for bit, in <1s."""
    start = time.perf_counter()

    cf0 = build_closed_form(0, table60)
    assert cf0.arctan_poly.coefficients == (Fraction(1),)
    assert cf0.const_poly.is_zero()

    cf2 = build_closed_form(2, table60)
    assert cf2.arctan_poly.coefficients == (Fraction(1, 2), Fraction(0), Fraction(3, 2))
    assert cf2.const_poly.coefficients == (Fraction(0), Fraction(-3, 2))

    assert table60.row(1) == (Fraction(-1),)
    assert table60.row(2) == (Fraction(3, 2), Fraction(1, 2))
    assert table60.row(3) == (Fraction(-5, 2), Fraction(-3, 2))
    assert table60.row(4) == (Fraction(35, 8), Fraction(15, 4), Fraction(3, 8))

    assert time.perf_counter() - start < 1.0


def test_2_recurrence_identity_exact_through_order_60():
    """Both polynomial parts satisfy the three-term recurrence exactly for
    1 <= l <= 60, in <10s."""
    start = time.perf_counter()
    table = CoeffTable.build(61)
    for l in range(1, 61):
        assert recurrence_identity_check(l, table), l
    assert time.perf_counter() - start < 10.0


def test_3_column_zero_closed_form_through_order_60(table60):
    """First coefficient of every row equals (-1)^l (2l-1)!!/l! exactly."""
    for l in range(61):
        assert table60.entry(l, 0) == c0_closed_form(l), l


def test_4_evaluation_triangulates_against_both_oracles(table60):
    """Closed-form evaluation agrees with adaptive quadrature to 1e-8 and
    with the independent Legendre route to 1e-9, over l=0..10 x five p
    values, in <60s."""
    start = time.perf_counter()
    for l in range(11):
        cf = build_closed_form(l, table60)
        for p in (0.1, 0.5, 1.0, 2.0, 10.0):
            value = float(evaluate(cf, p, 64).value)
            quad = quadrature_transform(l, p)
            assert abs(value - quad.value) <= 1e-8, (l, p)
            leg = legendre_q_oracle(l, p)
            assert abs(value - leg) <= 1e-9, (l, p)
    assert time.perf_counter() - start < 60.0


def test_5_large_p_asymptote_and_double_precision_control(table60):
    """p^(l+1) * transform at p=1e4 is within 1e-3 of l!/(2l+1)!! for
    l<=8.  A plain double-precision evaluation of the same closed form
    fails this by many orders of magnitude at l=8: the arctan and
    polynomial parts cancel ~2l*log2(p) bits, which is exactly what the
    precision reserve exists to absorb."""
    p = 1e4
    for l in range(9):
        cf = build_closed_form(l, table60)
        scaled = float(evaluate(cf, p, 64).value) * p ** (l + 1)
        want = math.factorial(l) / double_factorial(2 * l + 1)
        assert abs(scaled - want) <= 1e-3, l

    # negative control: 53-bit arithmetic, no reserve
    cf8 = build_closed_form(8, table60)
    acc_p = 0.0
    for c in reversed([cf8.arctan_poly.coefficient(k) for k in range(9)]):
        acc_p = acc_p * p + float(c)
    acc_q = 0.0
    for c in reversed([cf8.const_poly.coefficient(k) for k in range(8)]):
        acc_q = acc_q * p + float(c)
    naive = (acc_p * math.atan(1.0 / p) + acc_q) * p**9
    want8 = math.factorial(8) / double_factorial(17)
    assert abs(naive - want8) > 1e3  # not merely out of tolerance: garbage


def test_6_debye_routes_and_kernel_quadrature_agree(table60):
    """Elementary form vs closed-form route within 1e-12 relative on the
    p x omega grid; direct quadrature of the kernel within 1e-6; the p=1
    unit-parameter value equals (1/pi)(1 - pi/4)."""
    cf0 = build_closed_form(0, table60)
    cf2 = build_closed_form(2, table60)
    for p in (0.1, 0.5, 1.0, 2.0, 10.0):
        for w in (0.5, 1.0, 3.0):
            params = DebyeParams(m=1.0, length=1.0, v=1.0, omega_l=w)
            direct = memory_transform(p, params)
            via = memory_transform_via_closed_form(p, params, cf0, cf2)
            assert abs(direct - via) <= 1e-12 * abs(direct), (p, w)

    for p in (0.5, 1.0, 2.0):
        r = laplace_quadrature(
            lambda t: memory_function(t, UNIT),
            p,
            QuadratureConfig(abs_tolerance=1e-9),
            envelope=memory_function(0.0, UNIT),
            oscillation_onset=7.0,
        )
        assert abs(r.value - memory_transform(p, UNIT)) <= 1e-6, p

    want = (1.0 / math.pi) * (1.0 - math.pi / 4.0)
    assert memory_transform(1.0, UNIT) == pytest.approx(want, rel=1e-14)


def test_7_closed_form_is_at_least_ten_times_faster_and_growing():
    """Median closed-form evaluation beats the quadrature oracle by >=10x
    at p=1 for every l in {0,4,8,12,16,20}, and the fitted exponent of the
    speedup growth is positive.  Shared-machine scheduling can stall one
    timing block, so a single full re-measurement is allowed; the retry
    must pass on its own."""
    orders = [0, 4, 8, 12, 16, 20]

    def measure(reps):
        rep = run_benchmark(orders, [1.0], reps=reps)
        fit = fit_growth(rep)
        ok = all(e.speedup >= 10.0 for e in rep.entries) and fit.b > 0.0
        return ok, rep, fit

    ok, rep, fit = measure(reps=11)
    if not ok:
        ok, rep, fit = measure(reps=15)
    speedups = {e.l: round(e.speedup, 1) for e in rep.entries}
    assert ok, f"speedups {speedups}, fitted exponent {fit.b:.4f}"


def test_8_negative_controls_fail_as_they_must(table60):
    """(a) Corrupting the l=2 coefficient row breaks the recurrence
    identity.  (b) The wrong j_2 variant (coefficient 2 instead of 3 on
    cos t/t^2) leaves an uncancelled 1/t^2 term, and the kernel built from
    it misses the transform by far more than 1e-3."""
    rows = list(table60._rows[:4])
    assert rows[2] == (Fraction(3, 2), Fraction(1, 2))
    rows[2] = (rows[2][0], Fraction(1, 3))
    tampered = CoeffTable.__new__(CoeffTable)
    tampered._rows = tuple(rows)
    assert not recurrence_identity_check(2, tampered)

    def j2_wrong(t):
        return (3.0 / (t * t) - 1.0) * math.sin(t) / t - 2.0 * math.cos(t) / (t * t)

    def kernel_wrong(t):
        # quadrature nodes are interior, so t=0 is never hit
        pref = 1.0 / (3.0 * math.pi)
        return pref * (sph_bessel_j(0, t) - 2.0 * j2_wrong(t))

    truth = memory_transform(1.0, UNIT)
    try:
        r = laplace_quadrature(
            kernel_wrong, 1.0, QuadratureConfig(abs_tolerance=1e-9), envelope=1.0
        )
        wrong = r.value
    except QuadratureConvergenceError as exc:
        wrong = exc.partial.value
    assert abs(wrong - truth) > 1e-3
