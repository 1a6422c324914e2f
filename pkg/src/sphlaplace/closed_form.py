"""Closed-form Laplace transform of spherical Bessel functions.

For integer l >= 0 and p > 0,

    integral_0^inf j_l(t) exp(-p t) dt = P_l(p) * atan(1/p) + Q_{l-1}(p)

with P_l, Q_{l-1} polynomials with exact rational coefficients. They are
assembled from the derivative expansion of j_l: each derivative of
j_0 = sin(t)/t transforms to p^n*atan(1/p) minus a polynomial built from
the Taylor values of j_0 at zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import gmpy2

from .coefficients import CoeffTable, derivative_expansion
from .errors import DomainError
from .exact import Rational, RationalPolynomial, rational_to_string, real_at

RENDER_FORMATS = ("json", "plain", "latex")

# headroom beyond the predicted cancellation, in bits
_GUARD_BITS = 32


def j0_derivative_at_zero(n: int) -> Rational:
    """d^n/dt^n of sin(t)/t at t = 0: zero for odd n, (-1)^(n/2)/(n+1) for even."""
    if n < 0:
        raise DomainError(f"derivative order must be nonnegative, got {n}")
    if n % 2:
        return Fraction(0)
    sign = -1 if (n // 2) % 2 else 1
    return Fraction(sign, n + 1)


def laplace_j0_derivative(n: int) -> Tuple[RationalPolynomial, RationalPolynomial]:
    """Transform of the n-th derivative of j_0 as an (arctan, constant) pair.

    Repeated integration by parts gives

        L[j_0^(n)](p) = p^n atan(1/p) - sum_{m=0}^{n-1} p^(n-m-1) j_0^(m)(0).
    """
    if n < 0:
        raise DomainError(f"derivative order must be nonnegative, got {n}")
    arctan_part = RationalPolynomial.monomial(n)
    const = RationalPolynomial.zero()
    for m in range(n):
        c = j0_derivative_at_zero(m)
        if c != 0:
            const = const - RationalPolynomial.monomial(n - m - 1, c)
    return arctan_part, const


@dataclass(frozen=True)
class ClosedFormTransform:
    """Exact transform of j_l: arctan_poly(p)*atan(1/p) + const_poly(p).

    arctan_poly has degree l and the parity of l; const_poly has degree
    l-1 and the opposite parity (it is zero for l = 0).
    """

    l: int
    arctan_poly: RationalPolynomial
    const_poly: RationalPolynomial


def build_closed_form(l: int, table: CoeffTable) -> ClosedFormTransform:
    if l == 0:
        # the l = 0 transform is atan(1/p) itself; the expansion machinery
        # starts paying off at l >= 1
        table.row(0)
        return ClosedFormTransform(
            l=0, arctan_poly=RationalPolynomial.one(), const_poly=RationalPolynomial.zero()
        )
    expansion = derivative_expansion(l, table)
    arctan_poly = RationalPolynomial.zero()
    const_poly = RationalPolynomial.zero()
    for order, coeff in expansion.terms:
        part_a, part_c = laplace_j0_derivative(order)
        arctan_poly = arctan_poly + part_a.scaled(coeff)
        const_poly = const_poly + part_c.scaled(coeff)
    return ClosedFormTransform(l=l, arctan_poly=arctan_poly, const_poly=const_poly)


def cancellation_reserve_bits(l: int, p) -> int:
    """Extra working bits needed at order l and argument p.

    For large p the two parts of the closed form are each of size ~p^(l-1)
    while their sum is ~p^-(l+1), so about 2l*log2(p) bits cancel; the
    leading coefficient adds roughly another 2l bits of dynamic range.
    """
    if l == 0:
        return 0
    ctx = gmpy2.context(precision=64)
    x = _to_mpfr(p, 64)
    base = x if x > 2 else gmpy2.mpfr(2, 64)
    predicted = ctx.mul(ctx.log2(base), 2 * l)
    return int(ctx.ceil(predicted)) + 2 * l


@dataclass(frozen=True)
class EvalResult:
    value: gmpy2.mpfr
    precision_used_bits: int
    estimated_cancellation_bits: int


def _to_mpfr(p, bits: int) -> gmpy2.mpfr:
    if isinstance(p, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(p.numerator, p.denominator), bits)
    return gmpy2.mpfr(p, bits)


def evaluate(cf: ClosedFormTransform, p, out_precision_bits: int = 64) -> EvalResult:
    """Evaluate the closed form at p > 0, correctly handling cancellation.

    Work precision is out_precision_bits plus the predicted cancellation
    reserve plus a fixed guard; the result is rounded back to
    out_precision_bits. The reserve prediction is reported in the result.
    """
    if out_precision_bits < 24:
        raise DomainError(
            f"output precision must be at least 24 bits, got {out_precision_bits}"
        )
    probe = _to_mpfr(p, 64)
    if gmpy2.is_nan(probe) or gmpy2.is_infinite(probe) or probe <= 0:
        raise DomainError(f"transform argument must be a finite positive real, got {p!r}")

    reserve = cancellation_reserve_bits(cf.l, probe)
    work_bits = out_precision_bits + reserve + _GUARD_BITS
    ctx = gmpy2.context(precision=work_bits)
    x = _to_mpfr(p, work_bits)

    arctan_val = ctx.atan2(gmpy2.mpfr(1, work_bits), x)
    part_a = ctx.mul(cf.arctan_poly(x), arctan_val)
    part_c = cf.const_poly(x)
    total = ctx.add(part_a, part_c)

    return EvalResult(
        value=real_at(total, out_precision_bits),
        precision_used_bits=work_bits,
        estimated_cancellation_bits=reserve,
    )


def recurrence_identity_check(l: int, table: CoeffTable) -> bool:
    """Exact polynomial check of the three-term recurrence at order l.

    From j_{l+1} = -((2l+1)/(l+1)) j_l' + (l/(l+1)) j_{l-1} and
    L[j_l'] = p L[j_l] - j_l(0):

        P_{l+1} = -((2l+1)/(l+1)) p P_l + (l/(l+1)) P_{l-1}
        Q_l     = -((2l+1)/(l+1)) (p Q_{l-1} - j_l(0)) + (l/(l+1)) Q_{l-2}

    Requires 1 <= l <= table.l_max - 1. Both identities must hold exactly.
    """
    if l < 1:
        raise DomainError(f"recurrence check needs l >= 1, got {l}")
    if l + 1 > table.l_max:
        raise DomainError(f"recurrence check at l={l} needs table rows up to {l + 1}")
    lo = build_closed_form(l - 1, table)
    mid = build_closed_form(l, table)
    hi = build_closed_form(l + 1, table)

    a = Fraction(-(2 * l + 1), l + 1)
    b = Fraction(l, l + 1)
    j_l_zero = Fraction(1) if l == 0 else Fraction(0)

    p_expected = mid.arctan_poly.shifted(1).scaled(a) + lo.arctan_poly.scaled(b)
    q_expected = (
        (mid.const_poly.shifted(1) - RationalPolynomial((j_l_zero,))).scaled(a)
        + lo.const_poly.scaled(b)
    )
    return hi.arctan_poly == p_expected and hi.const_poly == q_expected


def _poly_strings(poly: RationalPolynomial, length: int) -> list:
    return [rational_to_string(poly.coefficient(k)) for k in range(length)]


def _plain_term(power: int, coeff: Rational, lead: bool) -> str:
    mag = coeff if lead else abs(coeff)
    body = rational_to_string(mag)
    if power == 0:
        return body
    suffix = "p" if power == 1 else f"p^{power}"
    return f"({body}){suffix}"


def _plain_poly(poly: RationalPolynomial) -> str:
    terms = sorted(poly.nonzero_terms(), reverse=True)
    pieces = [_plain_term(terms[0][0], terms[0][1], lead=True)]
    for power, coeff in terms[1:]:
        joiner = " - " if coeff < 0 else " + "
        pieces.append(joiner + _plain_term(power, coeff, lead=False))
    return "".join(pieces)


def _latex_rational(value: Rational) -> str:
    sign = "-" if value < 0 else ""
    return f"{sign}\\frac{{{abs(value.numerator)}}}{{{value.denominator}}}"


def _latex_term(power: int, coeff: Rational, lead: bool) -> str:
    mag = coeff if lead else abs(coeff)
    body = _latex_rational(mag)
    if power == 0:
        return body
    suffix = "p" if power == 1 else f"p^{{{power}}}"
    return f"{body}{suffix}"


def _latex_poly(poly: RationalPolynomial) -> str:
    terms = sorted(poly.nonzero_terms(), reverse=True)
    pieces = [_latex_term(terms[0][0], terms[0][1], lead=True)]
    for power, coeff in terms[1:]:
        joiner = " - " if coeff < 0 else " + "
        pieces.append(joiner + _latex_term(power, coeff, lead=False))
    return "".join(pieces)


def render(cf: ClosedFormTransform, fmt: str = "plain") -> str:
    """Serialize a closed form. Formats: json, plain, latex."""
    if fmt == "json":
        payload = {
            "l": cf.l,
            "P": _poly_strings(cf.arctan_poly, cf.l + 1),
            "Q": _poly_strings(cf.const_poly, cf.l),
        }
        return json.dumps(payload, separators=(",", ":"))
    if fmt == "plain":
        terms = list(cf.arctan_poly.nonzero_terms())
        p_text = _plain_poly(cf.arctan_poly)
        if len(terms) > 1 or (len(terms) == 1 and terms[0][0] == 0):
            p_text = f"({p_text})"
        out = f"{p_text}*atan(1/p)"
        for power, coeff in sorted(cf.const_poly.nonzero_terms(), reverse=True):
            joiner = " - " if coeff < 0 else " + "
            out += joiner + _plain_term(power, coeff, lead=False)
        return out
    if fmt == "latex":
        terms = list(cf.arctan_poly.nonzero_terms())
        p_text = _latex_poly(cf.arctan_poly)
        if len(terms) > 1:
            p_text = f"\\left({p_text}\\right)"
        out = f"{p_text}\\arctan\\left(\\frac{{1}}{{p}}\\right)"
        for power, coeff in sorted(cf.const_poly.nonzero_terms(), reverse=True):
            joiner = " - " if coeff < 0 else " + "
            out += joiner + _latex_term(power, coeff, lead=False)
        return out
    raise DomainError(f"unknown render format {fmt!r}; expected one of {RENDER_FORMATS}")
