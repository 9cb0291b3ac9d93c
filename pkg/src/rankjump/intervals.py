"""Directed-rounding interval arithmetic over Decimal.

Every certified numeric quantity (heights, Gram determinants) flows
through this module.  Endpoints live in a fixed 45-digit context and each
operation widens the result by one ulp on each side, so an Interval always
encloses the exact real value it tracks.  libmpdec semantics make the
results identical across platforms and worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal, ROUND_HALF_EVEN
from typing import Sequence

from .errors import EmptyInput

CTX = Context(prec=45, rounding=ROUND_HALF_EVEN, Emin=-999999, Emax=999999)

ZERO = Decimal(0)


def _down(x: Decimal) -> Decimal:
    return CTX.next_minus(x)


def _up(x: Decimal) -> Decimal:
    return CTX.next_plus(x)


@dataclass(frozen=True)
class Interval:
    lo: Decimal
    hi: Decimal

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(x) -> "Interval":
        d = Decimal(x)
        return Interval(d, d)

    @property
    def mid(self) -> Decimal:
        return CTX.divide(CTX.add(self.lo, self.hi), Decimal(2))

    @property
    def half_width(self) -> Decimal:
        return _up(CTX.divide(CTX.subtract(self.hi, self.lo), Decimal(2)))

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(_down(CTX.add(self.lo, other.lo)), _up(CTX.add(self.hi, other.hi)))

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(
            _down(CTX.subtract(self.lo, other.hi)), _up(CTX.subtract(self.hi, other.lo))
        )

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        cands = [
            CTX.multiply(self.lo, other.lo),
            CTX.multiply(self.lo, other.hi),
            CTX.multiply(self.hi, other.lo),
            CTX.multiply(self.hi, other.hi),
        ]
        return Interval(_down(min(cands)), _up(max(cands)))

    def div_exact_int(self, n: int) -> "Interval":
        """Divide by a positive exact integer."""
        d = Decimal(n)
        return Interval(_down(CTX.divide(self.lo, d)), _up(CTX.divide(self.hi, d)))

    def contains(self, x) -> bool:
        d = Decimal(x)
        return self.lo <= d <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def det_interval(M: Sequence[Sequence[Interval]]) -> Interval:
    """Determinant enclosure by Laplace expansion with column-subset memoing.

    Exact-arithmetic structure (only +, -, x on intervals), sound for any
    size; sizes here never exceed 8.
    """
    k = len(M)
    if k == 0:
        raise EmptyInput("empty matrix")
    if any(len(row) != k for row in M):
        raise ValueError("matrix is not square")
    if k > 8:
        raise ValueError("determinant supported up to 8x8")

    full = (1 << k) - 1
    memo: dict[int, Interval] = {0: Interval.exact(1)}

    def minor(colmask: int) -> Interval:
        if colmask in memo:
            return memo[colmask]
        row = k - bin(colmask).count("1")
        acc = None
        sign = 1
        for j in range(k):
            if not colmask >> j & 1:
                continue
            term = M[row][j] * minor(colmask & ~(1 << j))
            if sign < 0:
                term = -term
            acc = term if acc is None else acc + term
            sign = -sign
        memo[colmask] = acc
        return acc

    return minor(full)


_LN2 = CTX.ln(Decimal(2))
LN2 = Interval(_down(_LN2), _up(_LN2))

_TOP_BITS = 128


def ln_int_interval(n: int) -> Interval:
    """Enclosure of ln(n) for an integer n >= 1.

    Large integers are truncated to their top 128 bits; the discarded tail
    is absorbed into the enclosure via ln(m) <= ln(n) - shift*ln2 <= ln(m+1).
    """
    if n < 1:
        raise ValueError("ln_int_interval expects n >= 1")
    if n == 1:
        return Interval(ZERO, ZERO)
    bits = n.bit_length()
    if bits <= _TOP_BITS:
        v = CTX.ln(Decimal(n))
        return Interval(_down(v), _up(v))
    shift = bits - _TOP_BITS
    m = n >> shift
    lo = _down(CTX.ln(Decimal(m)))
    hi = _up(CTX.ln(Decimal(m + 1)))
    scaled = Interval.exact(shift) * LN2
    return Interval(lo, hi) + scaled
