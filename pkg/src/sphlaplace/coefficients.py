"""Rational coefficients C_k^(l) of the derivative expansion

    j_l(t) = sum_{k=0}^{floor(l/2)} C_k^(l) * d^(l-2k)/dt^(l-2k) j_0(t).

Rows are built by a two-row recursion; everything is exact Fraction
arithmetic so the table is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Tuple

from .errors import DomainError
from .exact import Rational, double_factorial


class CoeffTable:
    """Triangle of expansion coefficients, rows 0..l_max.

    Row l holds C_k^(l) for k = 0..floor(l/2). References outside the
    triangle are zero by convention, which lets one recursion cover both
    the leading column and the interior.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Tuple[Tuple[Rational, ...], ...]):
        self._rows = rows

    @classmethod
    def build(cls, l_max: int) -> "CoeffTable":
        if l_max < 0:
            raise DomainError(f"table order must be nonnegative, got {l_max}")
        rows = [(Fraction(1),)]
        if l_max >= 1:
            rows.append((Fraction(-1),))
        for l in range(1, l_max):
            # row l+1 from rows l and l-1
            prev, prev2 = rows[l], rows[l - 1]
            a = Fraction(-(2 * l + 1), l + 1)
            b = Fraction(l, l + 1)
            width = (l + 1) // 2 + 1
            row = []
            for k in range(width):
                term = a * prev[k] if k < len(prev) else Fraction(0)
                if 1 <= k <= len(prev2):
                    term += b * prev2[k - 1]
                row.append(term)
            rows.append(tuple(row))
        return cls(tuple(rows))

    @property
    def l_max(self) -> int:
        return len(self._rows) - 1

    def row(self, l: int) -> Tuple[Rational, ...]:
        if not 0 <= l <= self.l_max:
            raise DomainError(f"row {l} outside table range 0..{self.l_max}")
        return self._rows[l]

    def entry(self, l: int, k: int) -> Rational:
        """C_k^(l); zero for k outside 0..floor(l/2)."""
        row = self.row(l)
        if 0 <= k < len(row):
            return row[k]
        return Fraction(0)

    def __repr__(self) -> str:
        return f"CoeffTable(l_max={self.l_max})"


def c0_closed_form(l: int) -> Rational:
    """Leading-column closed form C_0^(l) = (-1)^l (2l-1)!! / l!."""
    if l < 0:
        raise DomainError(f"order must be nonnegative, got {l}")
    sign = -1 if l % 2 else 1
    return Fraction(sign * double_factorial(2 * l - 1), factorial(l))


@dataclass(frozen=True)
class DerivativeExpansion:
    """j_l as a finite combination of derivatives of j_0.

    ``terms`` pairs each derivative order l-2k with its coefficient C_k^(l),
    highest order first.
    """

    l: int
    terms: Tuple[Tuple[int, Rational], ...]


def derivative_expansion(l: int, table: CoeffTable) -> DerivativeExpansion:
    row = table.row(l)
    terms = tuple((l - 2 * k, c) for k, c in enumerate(row))
    return DerivativeExpansion(l=l, terms=terms)
