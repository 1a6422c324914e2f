"""Exact rational arithmetic and polynomials with rational coefficients.

Rationals are ``fractions.Fraction`` throughout: always reduced, arbitrary
size, exact. High-precision reals are ``gmpy2.mpfr`` values created through
explicit contexts, so precision is chosen by the caller and never leaks in
from global state.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Tuple

import gmpy2

from .errors import DomainError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)/(-?\d+)$")
_INT_RE = re.compile(r"^-?\d+$")


def rational_to_string(value: Rational) -> str:
    """Serialize a rational as ``"N/D"`` with D > 0, e.g. ``"-3/2"``, ``"5/1"``."""
    return f"{value.numerator}/{value.denominator}"


def rational_from_string(text: str) -> Rational:
    """Parse ``"N/D"`` or a bare integer string back into a Fraction.

    Raises DomainError on malformed input and ZeroDivisionError on a zero
    denominator, matching Fraction's own behavior.
    """
    text = text.strip()
    m = _RATIONAL_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        return Fraction(num, den)
    if _INT_RE.match(text):
        return Fraction(int(text))
    raise DomainError(f"not a rational literal: {text!r}")


def double_factorial(n: int) -> int:
    """n!! for integer n >= -1, with (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial undefined for n={n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def real_at(value, bits: int) -> gmpy2.mpfr:
    """Round ``value`` (int, Fraction, float, str or mpfr) to an mpfr with
    ``bits`` bits of precision."""
    if bits < 2:
        raise DomainError(f"precision must be at least 2 bits, got {bits}")
    if isinstance(value, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(value.numerator, value.denominator), bits)
    return gmpy2.mpfr(value, bits)


class RationalPolynomial:
    """Immutable dense polynomial with Fraction coefficients.

    Coefficients are stored ascending: coeffs[k] multiplies p**k. The zero
    polynomial stores an empty tuple and reports degree -1.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Rational] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs: Tuple[Rational, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> "RationalPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "RationalPolynomial":
        return cls((Fraction(1),))

    @classmethod
    def monomial(cls, k: int, coeff: Rational = Fraction(1)) -> "RationalPolynomial":
        """coeff * p**k."""
        if k < 0:
            raise DomainError(f"monomial degree must be nonnegative, got {k}")
        return cls((Fraction(0),) * k + (Fraction(coeff),))

    @property
    def coefficients(self) -> Tuple[Rational, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, k: int) -> Rational:
        if k < 0:
            raise DomainError(f"coefficient index must be nonnegative, got {k}")
        if k >= len(self._coeffs):
            return Fraction(0)
        return self._coeffs[k]

    def nonzero_terms(self) -> Iterator[Tuple[int, Rational]]:
        """Yield (power, coefficient) pairs for nonzero coefficients, ascending."""
        for k, c in enumerate(self._coeffs):
            if c != 0:
                yield k, c

    def parity(self) -> int | None:
        """0 if only even powers, 1 if only odd powers, None if mixed or zero."""
        powers = {k for k, _ in self.nonzero_terms()}
        if not powers:
            return None
        residues = {k % 2 for k in powers}
        if len(residues) == 1:
            return residues.pop()
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return RationalPolynomial(out)

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial(tuple(-c for c in self._coeffs))

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self + (-other)

    def scaled(self, r: Rational) -> "RationalPolynomial":
        """r * self."""
        r = Fraction(r)
        return RationalPolynomial(tuple(r * c for c in self._coeffs))

    def shifted(self, k: int) -> "RationalPolynomial":
        """p**k * self."""
        if k < 0:
            raise DomainError(f"shift must be nonnegative, got {k}")
        if self.is_zero():
            return self
        return RationalPolynomial((Fraction(0),) * k + self._coeffs)

    def __call__(self, x: gmpy2.mpfr) -> gmpy2.mpfr:
        """Horner evaluation at an mpfr point, in the precision of ``x``.

        Every product and sum is a fused multiply-add in the working context,
        so the only rounding beyond the unavoidable per-step one is the final
        conversion of each exact rational coefficient.
        """
        ctx = gmpy2.context(precision=x.precision)
        acc = gmpy2.mpfr(0, x.precision)
        for c in reversed(self._coeffs):
            q = gmpy2.mpq(c.numerator, c.denominator)
            acc = ctx.fma(acc, x, q)
        return acc

    def eval_rational(self, x: Rational) -> Rational:
        """Exact evaluation at a rational point."""
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        if self.is_zero():
            return "RationalPolynomial()"
        terms = ", ".join(f"{rational_to_string(c)}*p^{k}" for k, c in self.nonzero_terms())
        return f"RationalPolynomial<{terms}>"
