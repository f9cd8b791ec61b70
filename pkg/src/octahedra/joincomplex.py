"""Combinatorics of the join power [n]^{*k+1}.

A k-face is a (k+1)-tuple of vertex labels, one per line.  A
(k-1)-face has exactly one coordinate equal to ``None``.  A k-octahedron
is a (k+1)-tuple of 2-subsets ``(a, b)`` with ``a < b``; its faces are
the Cartesian product of its parts.  Labels are 1-based.

Canonical indexing: 2-subsets are ordered lexicographically, and an
octahedron's index is big-endian mixed radix over its parts with base
C(n, 2), so the first coordinate is the most significant.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import NamedTuple, Optional

Pair = tuple[int, int]
Octahedron = tuple[Pair, ...]
Face = tuple[Optional[int], ...]

__all__ = [
    "Pair",
    "Octahedron",
    "Face",
    "bar",
    "pairs",
    "pair_index",
    "octahedron_count",
    "oct_index",
    "oct_from_index",
    "enumerate_octahedra",
    "validate_octahedron",
    "faces_of",
    "all_faces",
    "vertex_disjoint",
    "octahedron_intersection",
    "g_pairs",
    "h_pairs",
    "t_pairs",
    "IdentityCheck",
    "verify_pair_product_identity",
    "face_mask",
    "xor_decompositions",
    "one_coordinate_decompositions",
    "decomposition_table",
    "check_decompositions_one_coordinate",
    "elementary_coboundary",
    "skeleton_joinpower_params",
]


def bar(x: int) -> Pair:
    """The 2-subset {1, x}."""
    if x <= 1:
        raise ValueError("bar(x) needs x > 1")
    return (1, x)


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[Pair, ...]:
    """All 2-subsets of [n] in lexicographic order."""
    return tuple(itertools.combinations(range(1, n + 1), 2))


def pair_index(p: Pair, n: int) -> int:
    a, b = p
    if not 1 <= a < b <= n:
        raise ValueError(f"{p} is not a 2-subset of [{n}] written in increasing order")
    return (a - 1) * n - (a - 1) * a // 2 + (b - a - 1)


def octahedron_count(n: int, k: int) -> int:
    return comb(n, 2) ** (k + 1)


def oct_index(p: Octahedron, n: int) -> int:
    base = comb(n, 2)
    idx = 0
    for part in p:
        idx = idx * base + pair_index(part, n)
    return idx


def oct_from_index(idx: int, n: int, k: int) -> Octahedron:
    base = comb(n, 2)
    if not 0 <= idx < base ** (k + 1):
        raise ValueError(f"index {idx} out of range for (n={n}, k={k})")
    ps = pairs(n)
    parts = []
    for _ in range(k + 1):
        idx, r = divmod(idx, base)
        parts.append(ps[r])
    return tuple(reversed(parts))


@lru_cache(maxsize=None)
def enumerate_octahedra(n: int, k: int) -> tuple[Octahedron, ...]:
    """All k-octahedra of [n]^{*k+1} in canonical index order."""
    if n < 2:
        raise ValueError("need n >= 2 to have any octahedra")
    if k < 0:
        raise ValueError("k must be non-negative")
    return tuple(itertools.product(pairs(n), repeat=k + 1))


def validate_octahedron(p: Octahedron, n: int | None = None) -> None:
    for part in p:
        if len(part) != 2 or part[0] >= part[1] or part[0] < 1:
            raise ValueError(f"bad octahedron part {part!r}")
        if n is not None and part[1] > n:
            raise ValueError(f"part {part!r} not inside [{n}]")


def faces_of(p: Octahedron) -> frozenset[Face]:
    """The 2^{k+1} k-faces of the octahedron."""
    return frozenset(itertools.product(*p))


def all_faces(n: int, k: int) -> list[Face]:
    return list(itertools.product(range(1, n + 1), repeat=k + 1))


def _coord_disjoint(x, y) -> bool:
    if x is None or y is None:
        return True
    if isinstance(x, int) and isinstance(y, int):
        return x != y
    xs = {x} if isinstance(x, int) else set(x)
    ys = {y} if isinstance(y, int) else set(y)
    return not (xs & ys)


def vertex_disjoint(x, y) -> bool:
    """Whether two faces / octahedra share no vertex.

    Vertices live on lines, so disjointness is checked coordinate by
    coordinate; ``None`` coordinates of a (k-1)-face are empty.
    """
    if len(x) != len(y):
        raise ValueError("objects from different join powers")
    return all(_coord_disjoint(a, b) for a, b in zip(x, y))


def octahedron_intersection(p: Octahedron, q: Octahedron) -> frozenset[Face]:
    return faces_of(p) & faces_of(q)


def _unordered(a, b):
    return (a, b) if a <= b else (b, a)


@lru_cache(maxsize=None)
def g_pairs(l: int) -> tuple[tuple[Octahedron, Octahedron], ...]:
    """Unordered pairs of l-octahedra of [3]^{*l+1} meeting exactly in 1^{*l+1}.

    Each coordinate must use {1,2} on one side and {1,3} on the other, so
    there are 2^{l+1} ordered and 2^l unordered pairs.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    out = set()
    for choice in itertools.product((2, 3), repeat=l + 1):
        p = tuple(bar(x) for x in choice)
        q = tuple(bar(5 - x) for x in choice)
        out.add(_unordered(p, q))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def h_pairs(k: int) -> frozenset[tuple[Face, Face]]:
    """Unordered pairs of vertex-disjoint k-faces of [3]^{*k+1}."""
    faces = all_faces(3, k)
    return frozenset(
        (s, t) for s, t in itertools.combinations(faces, 2) if vertex_disjoint(s, t)
    )


def t_pairs(p: Octahedron, q: Octahedron) -> frozenset[tuple[Face, Face]]:
    """Unordered face pairs {alpha, beta} with alpha in p and beta in q.

    Requires p and q to meet exactly in the face 1^{*k+1}; in that case
    (alpha, beta) -> {alpha, beta} is injective on p x q.
    """
    ones = (1,) * len(p)
    if octahedron_intersection(p, q) != {ones}:
        raise ValueError("t_pairs needs octahedra meeting exactly in 1^{*k+1}")
    return frozenset(_unordered(a, b) for a in faces_of(p) for b in faces_of(q))


class IdentityCheck(NamedTuple):
    holds: bool
    witness: Optional[tuple[Face, Face]]
    disjoint_pairs: frozenset
    product_sum: frozenset


def verify_pair_product_identity(k: int) -> IdentityCheck:
    """Compare the ordered vertex-disjoint face pairs of [3]^{*k+1} with the
    mod 2 sum of p x q over ordered octahedron pairs meeting in 1^{*k+1}.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    faces = all_faces(3, k)
    disjoint = frozenset(
        (s, t) for s in faces for t in faces if vertex_disjoint(s, t)
    )
    acc: set[tuple[Face, Face]] = set()
    for p, q in g_pairs(k):
        for a, b in ((p, q), (q, p)):
            acc ^= {(s, t) for s in faces_of(a) for t in faces_of(b)}
    total = frozenset(acc)
    diff = disjoint ^ total
    witness = min(diff) if diff else None
    return IdentityCheck(not diff, witness, disjoint, total)


# -- XOR decompositions ----------------------------------------------------


def face_mask(p: Octahedron, n: int) -> int:
    """Face set of ``p`` as a bitmask over the faces of [n]^{*k+1}."""
    mask = 0
    for face in itertools.product(*p):
        idx = 0
        for v in face:
            idx = idx * n + (v - 1)
        mask |= 1 << idx
    return mask


@lru_cache(maxsize=None)
def _mask_table(n: int, k: int) -> tuple[tuple[int, ...], dict[int, int]]:
    masks = tuple(face_mask(p, n) for p in enumerate_octahedra(n, k))
    return masks, {m: i for i, m in enumerate(masks)}


def xor_decompositions(p: Octahedron, n: int) -> list[tuple[Octahedron, Octahedron]]:
    """All unordered pairs {X, Y} of octahedra with faces(X) xor faces(Y) = faces(p).

    Exhaustive: for every octahedron X the face set of Y is forced, so a
    single pass over X with a lookup finds every decomposition.
    """
    validate_octahedron(p, n)
    k = len(p) - 1
    octs = enumerate_octahedra(n, k)
    masks, lookup = _mask_table(n, k)
    target = face_mask(p, n)
    out = []
    for i, mx in enumerate(masks):
        j = lookup.get(target ^ mx)
        if j is not None and i < j:
            out.append((octs[i], octs[j]))
    return out


def one_coordinate_decompositions(p: Octahedron, n: int) -> list[tuple[Octahedron, Octahedron]]:
    """Decompositions changing a single coordinate: P_i = X_i xor Y_i with
    |X_i & Y_i| = 1 and X_j = Y_j = P_j elsewhere."""
    validate_octahedron(p, n)
    out = []
    for i, (a, b) in enumerate(p):
        for c in range(1, n + 1):
            if c in (a, b):
                continue
            x = p[:i] + (tuple(sorted((a, c))),) + p[i + 1:]
            y = p[:i] + (tuple(sorted((b, c))),) + p[i + 1:]
            out.append(_unordered(x, y))
    return sorted(out)


@lru_cache(maxsize=None)
def decomposition_table(n: int, k: int) -> tuple[tuple[int, int, int], ...]:
    """Index triples (p, x, y), x < y, for every exhaustive decomposition."""
    masks, lookup = _mask_table(n, k)
    triples = []
    for p_idx, mp in enumerate(masks):
        for x_idx, mx in enumerate(masks):
            y_idx = lookup.get(mp ^ mx)
            if y_idx is not None and x_idx < y_idx:
                triples.append((p_idx, x_idx, y_idx))
    return tuple(triples)


def check_decompositions_one_coordinate(n: int, k: int):
    """Compare exhaustive decompositions with the one-coordinate family.

    Returns ``(holds, witness)``; the witness is the first octahedron with
    an extra or missing decomposition, with both lists.
    """
    for p in enumerate_octahedra(n, k):
        ex = sorted(xor_decompositions(p, n))
        oc = one_coordinate_decompositions(p, n)
        if ex != oc:
            return False, (p, ex, oc)
    return True, None


# -- coboundaries ----------------------------------------------------------


def elementary_coboundary(alpha: Face, e: Face) -> frozenset[tuple[Face, Face]]:
    """Pairs {alpha, beta} with beta a k-face of [3]^{*k+1} containing the
    (k-1)-face ``e`` and vertex-disjoint from ``alpha``."""
    k = len(alpha) - 1
    if k < 1:
        raise ValueError("elementary coboundaries need k >= 1")
    if len(e) != len(alpha) or sum(c is None for c in e) != 1:
        raise ValueError("e must be a (k-1)-face with exactly one empty coordinate")
    if any(c is None for c in alpha):
        raise ValueError("alpha must be a k-face")
    for c in (*alpha, *e):
        if c is not None and not 1 <= c <= 3:
            raise ValueError("faces must live in [3]^{*k+1}")
    if not vertex_disjoint(alpha, e):
        raise ValueError(f"{alpha} and {e} share a vertex")
    t = e.index(None)
    out = set()
    for v in range(1, 4):
        beta = e[:t] + (v,) + e[t + 1:]
        if vertex_disjoint(alpha, beta):
            out.add(_unordered(alpha, beta))
    return frozenset(out)


def skeleton_joinpower_params(n: int, k: int) -> tuple[int, list[list[int]]]:
    """Size s of a join power [s]^{*k+1} inside the k-skeleton of the
    n-simplex, and a split of its n+1 vertices into k+1 groups of size >= s.
    """
    if k < 1 or n < k:
        raise ValueError("need n >= k >= 1")
    total = n + 1
    s, extra = divmod(total, k + 1)
    groups = []
    start = 1
    for i in range(k + 1):
        size = s + (1 if i < extra else 0)
        groups.append(list(range(start, start + size)))
        start += size
    return s, groups
