"""Canonical (Neron-Tate) heights by the doubling limit, with rigorous
error bounds, and Gram-determinant independence certificates.

On an integral model y^2 = x^3 + Ax + B write x = u/v reduced and
H = max(|u|, v).  Duplication sends u/v to F/G with

  F = u^4 - 2Au^2v^2 - 8Buv^3 + A^2 v^4
  G = 4v(u^3 + Auv^2 + Bv^3)

and the classical Bezout identities (both re-verified exactly per curve in
the test suite; D = 4A^3 + 27B^2)

  (12u^2 v + 16A v^3) F + (-3u^3 + 5Auv^2 + 27Bv^3) G = 4D v^7
  f2 F + g2 G = 4D u^7,   f2, g2 the cubic cofactors in _u7_cofactors

bound the one-step defect:  h(2P) - 4h(P) <= beta = ln c1 from the
coefficient sums of F and G, and h(2P) - 4h(P) >= -alpha = -ln S from the
identities (the gcd of F and G divides 4D, and 4|D| H^7 <= S H^3
max(|F|,|G|)).  Summing the geometric tail of L_N = 4^(-N) h(x(2^N P)):

  hhat(P) in [L_N - alpha/(3*4^N), L_N + beta/(3*4^N)]

which is the enclosure everything below certifies against.  A positive
lower bound on the Gram determinant of the pairing
<P,Q> = (hhat(P+Q) - hhat(P) - hhat(Q))/2 proves the points independent
modulo torsion, hence a Mordell-Weil rank lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Optional, Sequence

from .curves import (
    Curve,
    Point,
    add,
    integral_model,
    is_torsion,
    on_curve,
    point_to_integral,
)
from .errors import EmptyInput, PointNotOnCurve, ToleranceUnreachable
from .intervals import CTX, Interval, det_interval, ln_int_interval

# Doubling depth hard cap: coordinate digits grow like 4^N.
DEPTH_CAP = 14

# Per-chain coordinate budget (bits) for adaptive Gram refinement.  Chains
# that would outgrow it stop refining; enclosures stay valid, so this can
# only prevent a certification, never fabricate one.
CHAIN_BUDGET_BITS = 1 << 18


@dataclass(frozen=True)
class HeightEstimate:
    """A canonical-height value with a rigorous two-sided error bound.

    The true height lies in [value - error_bound, value + error_bound].
    """

    value: Decimal
    error_bound: Decimal

    def to_json(self) -> dict:
        return {"value": str(self.value), "err": str(self.error_bound)}


def _estimate(iv: Interval) -> HeightEstimate:
    return HeightEstimate(value=iv.mid, error_bound=iv.half_width)


def naive_height(P: Point) -> Decimal:
    """log max(|u|, v) for x(P) = u/v reduced; 0 at infinity."""
    if P.is_infinity:
        return Decimal(0)
    return ln_int_interval(max(abs(P.x.numerator), P.x.denominator)).mid


def _u7_cofactors(A: int, B: int) -> tuple[tuple[int, int, int, int], tuple[int, int, int, int]]:
    """Cubic cofactors (f2, g2) of the u^7 identity, ascending in v-degree."""
    D = 4 * A**3 + 27 * B**2
    f2 = (4 * D, -4 * A * A * B, 12 * A**4 + 88 * A * B * B, 12 * A**3 * B + 96 * B**3)
    g2 = (
        A * A * B,
        5 * A**4 + 32 * A * B * B,
        26 * A**3 * B + 192 * B**3,
        -(3 * A**5 + 24 * A * A * B * B),
    )
    return f2, g2


def v7_cofactors(A: int, B: int) -> tuple[tuple[int, int, int, int], tuple[int, int, int, int]]:
    """Cubic cofactors (f1, g1) of the v^7 identity, ascending in v-degree."""
    return (0, 12, 0, 16 * A), (-3, 0, 5 * A, 27 * B)


def u7_cofactors(A: int, B: int):
    return _u7_cofactors(A, B)


def defect_bounds(C: Curve) -> tuple[Decimal, Decimal]:
    """(alpha, beta): rigorous bounds -alpha <= h(2P) - 4h(P) <= beta.

    Requires an integral model.
    """
    if C.A.denominator != 1 or C.B.denominator != 1:
        raise ValueError("defect bounds need an integral model")
    A, B = int(C.A), int(C.B)
    c1 = max(1 + 2 * abs(A) + 8 * abs(B) + A * A, 4 * (1 + abs(A) + abs(B)))
    s_v = 15 + 21 * abs(A) + 27 * abs(B)
    f2, g2 = _u7_cofactors(A, B)
    s_u = sum(abs(c) for c in f2) + sum(abs(c) for c in g2)
    alpha = ln_int_interval(max(s_v, s_u)).hi
    beta = ln_int_interval(c1).hi
    return alpha, beta


class XChain:
    """The x-coordinate orbit of repeated doubling on an integral model.

    State is the reduced pair (u, v) for x(2^N P).  Reduction after each
    step divides out gcd(F, G), which divides 4D, so it costs one small
    gcd instead of a gcd of the full-size coordinates.
    """

    def __init__(self, C: Curve, P: Point):
        if P.is_infinity:
            raise ValueError("chain requires an affine point")
        self.a = int(C.A)
        self.b = int(C.B)
        self.t = abs(4 * (4 * self.a**3 + 27 * self.b**2))
        self.u = P.x.numerator
        self.v = P.x.denominator
        self.depth = 0

    def step(self) -> None:
        a, b, u, v = self.a, self.b, self.u, self.v
        u2 = u * u
        v2 = v * v
        uv = u * v
        F = u2 * u2 - 2 * a * u2 * v2 - 8 * b * uv * v2 + a * a * v2 * v2
        G = 4 * v * (u * u2 + a * u * v2 + b * v * v2)
        if G == 0:
            raise ArithmeticError("doubling hit a 2-torsion point")
        g = math.gcd(math.gcd(F, self.t), math.gcd(G, self.t))
        F //= g
        G //= g
        if G < 0:
            F, G = -F, -G
        if F == 0:
            # x(2P) = 0: the identities force G | 4D, so g above already
            # cleared it; keep the canonical 0/1 form regardless.
            G = 1
        self.u, self.v = F, G
        self.depth += 1

    def size_bits(self) -> int:
        return max(self.u.bit_length(), self.v.bit_length())

    def naive_height_interval(self) -> Interval:
        return ln_int_interval(max(abs(self.u), self.v))


def _tail_interval(alpha: Decimal, beta: Decimal, depth: int) -> Interval:
    return Interval(-alpha, beta).div_exact_int(3 * 4**depth)


def _chain_height_interval(chain: XChain, alpha: Decimal, beta: Decimal) -> Interval:
    L = chain.naive_height_interval().div_exact_int(4**chain.depth)
    return L + _tail_interval(alpha, beta, chain.depth)


def depth_for_tolerance(alpha: Decimal, beta: Decimal, tol: Decimal) -> int:
    """Smallest N with claimed error (alpha+beta)/(6*4^N) <= tol, capped."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    spread = CTX.add(alpha, beta)
    for N in range(DEPTH_CAP + 1):
        if CTX.divide(spread, Decimal(6 * 4**N)) <= tol:
            return N
    raise ToleranceUnreachable(
        f"tolerance {tol} needs doubling depth beyond {DEPTH_CAP}"
    )


def _as_decimal(tol) -> Decimal:
    if isinstance(tol, Decimal):
        return tol
    if isinstance(tol, float):
        return Decimal(repr(tol))
    return Decimal(str(tol))


def height_interval(C: Curve, P: Point, depth: int) -> Interval:
    """Enclosure of hhat(P) at a fixed doubling depth, on any model.

    Torsion points (including infinity) get the exact interval [0, 0].
    """
    if not on_curve(C, P):
        raise PointNotOnCurve(f"{P} not on {C}")
    Ci, u = integral_model(C)
    Pi = point_to_integral(P, u)
    if is_torsion(Ci, Pi):
        return Interval.exact(0)
    alpha, beta = defect_bounds(Ci)
    chain = XChain(Ci, Pi)
    for _ in range(depth):
        chain.step()
    return _chain_height_interval(chain, alpha, beta)


def canonical_height(C: Curve, P: Point, tol=Decimal("1e-6")) -> HeightEstimate:
    """Doubling-limit estimate with claimed error bound <= tol.

    Raises ToleranceUnreachable when the required depth exceeds the cap.
    """
    tol_d = _as_decimal(tol)
    if tol_d <= 0:
        raise ValueError("tol must be positive")
    if not on_curve(C, P):
        raise PointNotOnCurve(f"{P} not on {C}")
    Ci, u = integral_model(C)
    Pi = point_to_integral(P, u)
    if is_torsion(Ci, Pi):
        return HeightEstimate(value=Decimal(0), error_bound=tol_d)
    alpha, beta = defect_bounds(Ci)
    depth = depth_for_tolerance(alpha, beta, tol_d)
    chain = XChain(Ci, Pi)
    for _ in range(depth):
        chain.step()
    est = _estimate(_chain_height_interval(chain, alpha, beta))
    if est.error_bound > tol_d and depth < DEPTH_CAP:
        chain.step()
        est = _estimate(_chain_height_interval(chain, alpha, beta))
    if est.error_bound > tol_d:
        raise ToleranceUnreachable(f"claimed error {est.error_bound} exceeds {tol_d}")
    return est


def height_pairing(C: Curve, P: Point, Q: Point, tol=Decimal("1e-6")) -> Interval:
    """Enclosure of <P,Q> = (hhat(P+Q) - hhat(P) - hhat(Q))/2."""
    tol_d = _as_decimal(tol)
    Ci, u = integral_model(C)
    Pi, Qi = point_to_integral(P, u), point_to_integral(Q, u)
    alpha, beta = defect_bounds(Ci)
    depth = depth_for_tolerance(alpha, beta, tol_d)

    def hh(R: Point) -> Interval:
        if R.is_infinity or is_torsion(Ci, R):
            return Interval.exact(0)
        chain = XChain(Ci, R)
        for _ in range(depth):
            chain.step()
        return _chain_height_interval(chain, alpha, beta)

    S = add(Ci, Pi, Qi)
    return (hh(S) - hh(Pi) - hh(Qi)).div_exact_int(2)


@dataclass(frozen=True)
class GramCertificate:
    """Interval Gram matrix of canonical-height pairings.

    certified = True means the determinant's rigorous lower bound is
    strictly positive, proving the points independent modulo torsion and
    hence rank >= len(points).
    """

    points: tuple[Point, ...]
    entries: tuple[tuple[Interval, ...], ...]
    det_lower_bound: Decimal
    certified: bool
    heights: tuple[HeightEstimate, ...]

    def to_json(self) -> dict:
        return {
            "points": [str(P) for P in self.points],
            "entries": [
                [[str(e.lo), str(e.hi)] for e in row] for row in self.entries
            ],
            "det_lower_bound": str(self.det_lower_bound),
            "certified": self.certified,
        }


def gram_certify(C: Curve, points: Sequence[Point], tol=Decimal("1e-4")) -> GramCertificate:
    """Certify independence of points via a positive interval Gram determinant.

    Refinement is adaptive: all height chains advance together, one
    doubling per round, until either the determinant's lower bound turns
    positive (early success), every chain reaches the depth matching tol,
    or a chain hits the coordinate budget.  Every intermediate enclosure
    is rigorous, so stopping early never produces a false certificate.
    """
    tol_d = _as_decimal(tol)
    pts = list(points)
    if not pts:
        raise EmptyInput("gram_certify needs at least one point")
    for P in pts:
        if not on_curve(C, P):
            raise PointNotOnCurve(f"{P} not on {C}")
    if len({(P.x, P.y) for P in pts}) != len(pts):
        raise ValueError("points must be pairwise distinct")

    Ci, u = integral_model(C)
    ipts = [point_to_integral(P, u) for P in pts]
    alpha, beta = defect_bounds(Ci)
    try:
        target = depth_for_tolerance(alpha, beta, tol_d)
    except ToleranceUnreachable:
        target = DEPTH_CAP

    k = len(ipts)
    need: dict[tuple[int, int], Point] = {}
    for i in range(k):
        need[(i, i)] = ipts[i]
        for j in range(i + 1, k):
            need[(i, j)] = add(Ci, ipts[i], ipts[j])

    chains: dict[tuple[int, int], Optional[XChain]] = {}
    for key, R in need.items():
        if R.is_infinity or is_torsion(Ci, R):
            chains[key] = None  # exact zero height
        else:
            chains[key] = XChain(Ci, R)

    def intervals() -> dict[tuple[int, int], Interval]:
        out = {}
        for key, ch in chains.items():
            if ch is None:
                out[key] = Interval.exact(0)
            else:
                out[key] = _chain_height_interval(ch, alpha, beta)
        return out

    def gram_matrix(h: dict[tuple[int, int], Interval]) -> list[list[Interval]]:
        M = [[None] * k for _ in range(k)]
        for i in range(k):
            M[i][i] = h[(i, i)]
            for j in range(i + 1, k):
                entry = (h[(i, j)] - h[(i, i)] - h[(j, j)]).div_exact_int(2)
                M[i][j] = entry
                M[j][i] = entry
        return M

    while True:
        h = intervals()
        M = gram_matrix(h)
        det = det_interval(M)
        if det.strictly_positive():
            break
        live = [
            ch
            for ch in chains.values()
            if ch is not None
            and ch.depth < target
            and ch.size_bits() * 4 <= CHAIN_BUDGET_BITS
        ]
        if not live:
            break
        for ch in live:
            ch.step()

    entries = tuple(tuple(row) for row in M)
    heights = tuple(_estimate(h[(i, i)]) for i in range(k))
    return GramCertificate(
        points=tuple(pts),
        entries=entries,
        det_lower_bound=det.lo,
        certified=det.strictly_positive(),
        heights=heights,
    )
