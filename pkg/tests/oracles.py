"""Reference implementations used only by the tests.

Each oracle works from the definitions with a different method than the
package: dense uint8 elimination, frozenset face algebra, integer
orientation tests.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def np_rank(arr) -> int:
    """Rank over GF(2) by dense elimination on a uint8 copy."""
    a = np.array(arr, dtype=np.uint8) & 1
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        hit = np.nonzero(a[:, c])[0]
        hit = hit[hit != r]
        a[hit] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def np_matmul(a, b) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % 2


def subsets2(n):
    return [frozenset(s) for s in itertools.combinations(range(1, n + 1), 2)]


def octahedra(n, k):
    """Octahedra as tuples of frozensets, in lexicographic order of sorted parts."""
    return [tuple(p) for p in itertools.product(subsets2(n), repeat=k + 1)]


def faces(p):
    return frozenset(itertools.product(*[sorted(part) for part in p]))


def disjoint(p, q) -> bool:
    return all(not (a & b) for a, b in zip(p, q))


def decompositions(n, k):
    """All (P, X, Y) index triples with faces(P) = faces(X) ^ faces(Y), X < Y."""
    octs = octahedra(n, k)
    fs = [faces(p) for p in octs]
    where = {f: i for i, f in enumerate(fs)}
    out = []
    for pi, fp in enumerate(fs):
        for xi, fx in enumerate(fs):
            yi = where.get(fp ^ fx)
            if yi is not None and xi < yi:
                out.append((pi, xi, yi))
    return out


def sa_pairs(n, k):
    """Index pairs of octahedra of [3]^{*k+1} meeting exactly in 1^{*k+1}."""
    octs = octahedra(n, k)
    idx = {p: i for i, p in enumerate(octs)}
    small = [p for p in octs if all(part <= {1, 2, 3} for part in p)]
    ones = frozenset([(1,) * (k + 1)])
    seen = set()
    for p in small:
        for q in small:
            if faces(p) & faces(q) == ones:
                seen.add(tuple(sorted((idx[p], idx[q]))))
    return sorted(seen)


def naive_properties(n, k, dense) -> dict[str, bool]:
    a = np.asarray(dense, dtype=np.uint8)
    octs = octahedra(n, k)
    sym = bool((a == a.T).all())
    ind = all(
        a[i, j] == 0
        for i, p in enumerate(octs)
        for j, q in enumerate(octs)
        if disjoint(p, q)
    )
    add = all(((a[p] ^ a[x] ^ a[y]) == 0).all() for p, x, y in decompositions(n, k))
    sa = 0
    for i, j in sa_pairs(n, k):
        sa ^= int(a[i, j])
    return {"symmetric": sym, "independent": ind, "additive": add, "nontrivial": sa == 1}


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def segments_cross(p1, p2, q1, q2) -> bool:
    """Proper crossing of two segments in the plane (integer orientation test)."""
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def vandermonde_det(ts) -> Fraction:
    """Product formula for the determinant of the affine moment-curve matrix."""
    d = Fraction(1)
    for i, j in itertools.combinations(range(len(ts)), 2):
        d *= ts[j] - ts[i]
    return d
