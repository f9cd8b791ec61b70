"""Intersections of k-faces of [3]^{*k+1} mapped to the moment curve in R^{2k}.

Vertex ``a`` of line ``i`` (lines numbered 0..k) goes to gamma(a + 3i)
with gamma(t) = (t, t^2, ..., t^{2k}).  Two vertex-disjoint faces then
intersect iff their vertices alternate along the curve, which reduces to
one face dominating the other coordinatewise.  ``geometric_intersects``
is an independent exact-rational check of that criterion.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .joincomplex import Face, all_faces, vertex_disjoint

log = logging.getLogger(__name__)

__all__ = [
    "GeneralPositionMap",
    "DegenerateError",
    "moment_map",
    "alternation_intersects",
    "geometric_intersects",
    "intersection_point",
    "affinely_independent",
    "VanKampenCount",
    "van_kampen_number",
]


class DegenerateError(ValueError):
    """The map is not in general position for the queried faces."""


@dataclass(frozen=True)
class GeneralPositionMap:
    k: int
    coords: Mapping[tuple[int, int], tuple[int, ...]]

    @property
    def dim(self) -> int:
        return 2 * self.k

    def image(self, face: Face) -> list[tuple[int, ...]]:
        """Vertex images of a k-face (coordinates are 1-based positions)."""
        return [self.coords[(i, a)] for i, a in enumerate(face)]


def moment_map(k: int) -> GeneralPositionMap:
    if k < 1:
        raise ValueError("the moment map needs k >= 1")
    coords = {}
    for i in range(k + 1):
        for a in range(1, 4):
            t = a + 3 * i
            coords[(i, a)] = tuple(t ** e for e in range(1, 2 * k + 1))
    return GeneralPositionMap(k, coords)


def _check_faces(sigma: Face, tau: Face, k: int | None = None) -> None:
    if len(sigma) != len(tau):
        raise ValueError("faces of different dimension")
    if k is not None and len(sigma) != k + 1:
        raise ValueError(f"faces must have {k + 1} coordinates")
    for v in (*sigma, *tau):
        if v is None or not 1 <= v <= 3:
            raise ValueError("faces must be k-faces of [3]^{*k+1}")
    if not vertex_disjoint(sigma, tau):
        raise ValueError(f"{sigma} and {tau} share a vertex")


def alternation_intersects(sigma: Face, tau: Face) -> bool:
    """True iff one face is coordinatewise strictly below the other."""
    _check_faces(sigma, tau)
    return all(s < t for s, t in zip(sigma, tau)) or all(s > t for s, t in zip(sigma, tau))


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]):
    """Gauss-Jordan over the rationals.

    Returns ``(solution, status)`` with status ``"unique"``,
    ``"inconsistent"`` or ``"underdetermined"``.
    """
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    ncols = len(a[0])
    piv_cols = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, n) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if m[i][ncols] != 0:
            return None, "inconsistent"
    if r < ncols:
        return None, "underdetermined"
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][ncols]
    return sol, "unique"


class IntersectionResult(NamedTuple):
    intersects: bool
    barycentric: tuple[Fraction, ...] | None
    boundary: bool


def intersection_point(gmap: GeneralPositionMap, sigma: Face, tau: Face) -> IntersectionResult:
    """Solve sum l_j p_j = sum m_j q_j, sum l = sum m = 1 exactly.

    The system is square (2k + 2 unknowns and equations).  Zero barycentric
    coordinates mean contact on the boundary, reported and counted as no
    intersection.
    """
    _check_faces(sigma, tau, gmap.k)
    ps = gmap.image(sigma)
    qs = gmap.image(tau)
    kk = len(ps)
    rows = []
    rhs = []
    for d in range(gmap.dim):
        rows.append([Fraction(p[d]) for p in ps] + [Fraction(-q[d]) for q in qs])
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * kk + [Fraction(0)] * kk)
    rhs.append(Fraction(1))
    rows.append([Fraction(0)] * kk + [Fraction(1)] * kk)
    rhs.append(Fraction(1))
    sol, status = _solve_exact(rows, rhs)
    if status == "underdetermined":
        raise DegenerateError(f"images of {sigma} and {tau} span a degenerate system")
    if status == "inconsistent":
        return IntersectionResult(False, None, False)
    if any(x < 0 for x in sol):
        return IntersectionResult(False, tuple(sol), False)
    if any(x == 0 for x in sol):
        log.warning("faces %s and %s touch on their boundaries", sigma, tau)
        return IntersectionResult(False, tuple(sol), True)
    return IntersectionResult(True, tuple(sol), False)


def geometric_intersects(gmap: GeneralPositionMap, sigma: Face, tau: Face) -> bool:
    return intersection_point(gmap, sigma, tau).intersects


def affinely_independent(points: Sequence[Sequence[int]]) -> bool:
    """Exact rank test of the difference vectors p_i - p_0."""
    if len(points) <= 1:
        return True
    base = points[0]
    vecs = [[Fraction(x - y) for x, y in zip(p, base)] for p in points[1:]]
    r = 0
    ncols = len(base)
    for c in range(ncols):
        pr = next((i for i in range(r, len(vecs)) if vecs[i][c] != 0), None)
        if pr is None:
            continue
        vecs[r], vecs[pr] = vecs[pr], vecs[r]
        for i in range(r + 1, len(vecs)):
            if vecs[i][c] != 0:
                f = vecs[i][c] / vecs[r][c]
                vecs[i] = [x - f * y for x, y in zip(vecs[i], vecs[r])]
        r += 1
    return r == len(vecs)


@dataclass
class VanKampenCount:
    k: int
    count: int
    parity: int
    pairs_checked: int
    geometric_count: int | None = None
    disagreements: list[tuple[Face, Face]] | None = None


def van_kampen_number(k: int, geometric: bool = False) -> VanKampenCount:
    """Count unordered vertex-disjoint face pairs of [3]^{*k+1} whose images
    under the moment map intersect; the parity is the van Kampen number.

    With ``geometric=True`` every pair is also solved exactly and any
    disagreement with the alternation criterion is recorded.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    faces = all_faces(3, k)
    gmap = moment_map(k) if geometric else None
    count = 0
    gcount = 0
    checked = 0
    disagreements = []
    for s, t in itertools.combinations(faces, 2):
        if not all(x != y for x, y in zip(s, t)):
            continue
        checked += 1
        alt = all(x < y for x, y in zip(s, t)) or all(x > y for x, y in zip(s, t))
        count += alt
        if gmap is not None:
            geo = geometric_intersects(gmap, s, t)
            gcount += geo
            if geo != alt:
                disagreements.append((s, t))
    return VanKampenCount(
        k, count, count % 2, checked,
        gcount if geometric else None,
        disagreements if geometric else None,
    )
