"""Integer factorization sized for this package's scans, squarefree parts,
and F2 linear algebra on square classes.

Trial division runs over a cached prime sieve below 10**6; anything left is
split with Brent's variant of Pollard rho after a deterministic
Miller-Rabin test.  Scan inputs stay far below the range where this
strategy struggles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Sequence

from .errors import UnitClass, ZeroInput

_TRIAL_LIMIT = 10**6
_small_primes: list[int] = []

# Witnesses proving primality for every n < 3.3 * 10**24 (Sorenson-Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _sieve() -> list[int]:
    global _small_primes
    if not _small_primes:
        flags = bytearray([1]) * _TRIAL_LIMIT
        flags[0] = flags[1] = 0
        for i in range(2, isqrt(_TRIAL_LIMIT) + 1):
            if flags[i]:
                flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
        _small_primes = [i for i in range(_TRIAL_LIMIT) if flags[i]]
    return _small_primes


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    # Deterministic parameter sweep keeps results reproducible.
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: dict[int, int] = {}
    checkpoint = 1000  # bail out early when the cofactor turns prime
    for p in _sieve():
        if p * p > n:
            break
        if p >= checkpoint:
            if is_probable_prime(n):
                out[n] = out.get(n, 0) + 1
                return dict(sorted(out.items()))
            checkpoint *= 10
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return dict(sorted(out.items()))
    stack = [n]
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _brent_rho(m)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class SquareClass:
    """An element of Q*/(Q*)^2: a squarefree integer with its prime support.

    `squarefree` carries the sign of the original number; -1 is a legal
    class (negative=True, no primes).
    """

    squarefree: int
    primes: tuple[int, ...]
    negative: bool

    def __post_init__(self) -> None:
        prod = -1 if self.negative else 1
        for p in self.primes:
            prod *= p
        if prod != self.squarefree:
            raise ValueError("inconsistent square class")


def squarefree_part(n: int) -> SquareClass:
    """The squarefree s with n = s * m^2; sign of s equals sign of n."""
    if n == 0:
        raise ZeroInput("squarefree_part(0)")
    negative = n < 0
    primes = tuple(p for p, e in factorize(abs(n)).items() if e % 2 == 1)
    s = -1 if negative else 1
    for p in primes:
        s *= p
    return SquareClass(squarefree=s, primes=primes, negative=negative)


def squarefree_part_of_rational(q: Fraction) -> SquareClass:
    """Square class of a nonzero rational: the class of num*den."""
    if q == 0:
        raise ZeroInput("squarefree_part_of_rational(0)")
    return squarefree_part(q.numerator * q.denominator)


def class_vectors(classes: Sequence[SquareClass]) -> tuple[list[int], list[int]]:
    """F2 exponent vectors as bitmasks (bit 0 = sign, one bit per prime).

    Returns (vectors, prime_basis) with the basis sorted ascending.
    """
    basis = sorted({p for c in classes for p in c.primes})
    index = {p: i + 1 for i, p in enumerate(basis)}
    vecs = []
    for c in classes:
        v = 1 if c.negative else 0
        for p in c.primes:
            v |= 1 << index[p]
        vecs.append(v)
    return vecs, basis


def square_class_independent(
    classes: Sequence[SquareClass],
) -> tuple[bool, Optional[tuple[SquareClass, ...]]]:
    """Linear independence of square classes over F2.

    Returns (True, None) when independent; otherwise (False, subset) for a
    nonempty subset of the input whose product is a rational square.
    """
    for c in classes:
        if c.squarefree == 1:
            raise UnitClass("class 1 is not allowed")
    vecs, _ = class_vectors(classes)
    pivots: list[tuple[int, int]] = []  # (vector, combination bitmask)
    for i, v in enumerate(vecs):
        combo = 1 << i
        v, combo = _reduce(v, combo, pivots)
        if v == 0:
            subset = tuple(classes[j] for j in range(len(classes)) if combo >> j & 1)
            return False, subset
        pivots.append((v, combo))
        pivots.sort(key=lambda t: -_top_bit(t[0]))
    return True, None


def _top_bit(v: int) -> int:
    return v.bit_length()


def _reduce(v: int, combo: int, pivots: list[tuple[int, int]]) -> tuple[int, int]:
    changed = True
    while changed and v:
        changed = False
        for pv, pc in pivots:
            if _top_bit(v) == _top_bit(pv):
                v ^= pv
                combo ^= pc
                changed = True
                break
    return v, combo
