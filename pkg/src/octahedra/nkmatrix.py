"""Matrices indexed by k-octahedra and the checks that define an (n, k)-matrix.

An (n, k)-matrix is symmetric, independent (zero on vertex-disjoint
octahedron pairs), additive (rows respect XOR decompositions of
octahedra) and non-trivial (the sum over the pairs of ``g_pairs(k)`` is 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb
from typing import Any

from . import joincomplex as jc
from .gf2 import Gf2Matrix, block, rank, set_bits

__all__ = [
    "OctMatrix",
    "PropertyReport",
    "PropertyError",
    "check_properties",
    "require_properties",
    "compute_sa",
    "sa_index_pairs",
    "check_strong_nontriviality",
    "coordinate_block",
    "heredity_reduce",
    "check_one_coordinate_swap",
    "RankBoundReport",
    "rank_lower_bound",
    "verify_rank_bound",
]


class PropertyError(ValueError):
    """An input matrix lacks a property an operation relies on."""


@dataclass(frozen=True)
class OctMatrix:
    n: int
    k: int
    m: Gf2Matrix

    def __post_init__(self):
        size = jc.octahedron_count(self.n, self.k)
        if self.m.shape != (size, size):
            raise ValueError(
                f"(n={self.n}, k={self.k}) needs a {size}x{size} matrix, got {self.m.shape}"
            )

    @property
    def size(self) -> int:
        return self.m.nrows

    def entry(self, p: jc.Octahedron, q: jc.Octahedron) -> int:
        return self.m[jc.oct_index(p, self.n), jc.oct_index(q, self.n)]

    def rank(self) -> int:
        return rank(self.m)

    @classmethod
    def zeros(cls, n: int, k: int) -> OctMatrix:
        return cls(n, k, Gf2Matrix.zeros(jc.octahedron_count(n, k)))

    def meta(self) -> dict[str, Any]:
        return {"n": self.n, "k": self.k, "indexing": "joinpower-lex"}


@dataclass
class PropertyReport:
    symmetric: bool
    independent: bool
    additive: bool
    nontrivial: bool
    sa_value: int
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def is_nk_matrix(self) -> bool:
        return self.symmetric and self.independent and self.additive and self.nontrivial

    def failed(self) -> list[str]:
        return [
            name
            for name in ("symmetric", "independent", "additive", "nontrivial")
            if not getattr(self, name)
        ]


@lru_cache(maxsize=None)
def _disjoint_masks(n: int, k: int) -> tuple[int, ...]:
    """Per octahedron, the bitset of octahedra vertex-disjoint from it."""
    ps = jc.pairs(n)
    base = len(ps)
    # per coordinate, pair index -> bitset of disjoint pair indices
    single = []
    for a in ps:
        bits = 0
        for j, b in enumerate(ps):
            if not set(a) & set(b):
                bits |= 1 << j
        single.append(bits)
    masks = []
    for p in jc.enumerate_octahedra(n, k):
        idx_sets = [set_bits(single[jc.pair_index(part, n)]) for part in p]
        mask = 0
        for combo in itertools.product(*idx_sets):
            idx = 0
            for c in combo:
                idx = idx * base + c
            mask |= 1 << idx
        masks.append(mask)
    return tuple(masks)


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def sa_index_pairs(n: int, k: int) -> list[tuple[int, int]]:
    """Index pairs (p, q) summed in SA, one per unordered pair."""
    if n < 3:
        raise ValueError("SA needs n >= 3")
    return [(jc.oct_index(p, n), jc.oct_index(q, n)) for p, q in jc.g_pairs(k)]


def compute_sa(a: OctMatrix) -> int:
    """Sum of A[P, Q] over the unordered pairs meeting exactly in 1^{*k+1}."""
    s = 0
    for i, j in sa_index_pairs(a.n, a.k):
        s ^= a.m[i, j]
    return s


def check_properties(a: OctMatrix) -> PropertyReport:
    """Evaluate symmetry, independence, additivity and non-triviality.

    Every failed property carries the lexicographically smallest violating
    index configuration as its witness.
    """
    rows = a.m.rows
    witnesses: dict[str, tuple] = {}

    t = a.m.T.rows
    symmetric = True
    for i, (r, c) in enumerate(zip(rows, t)):
        diff = r ^ c
        if diff:
            symmetric = False
            j = _lowest_bit(diff)
            witnesses["symmetric"] = (min(i, j), max(i, j))
            break

    independent = True
    for i, mask in enumerate(_disjoint_masks(a.n, a.k)):
        bad = rows[i] & mask
        if bad:
            independent = False
            witnesses["independent"] = (i, _lowest_bit(bad))
            break

    additive = True
    for p, x, y in jc.decomposition_table(a.n, a.k):
        bad = rows[p] ^ rows[x] ^ rows[y]
        if bad:
            additive = False
            witnesses["additive"] = (p, x, y, _lowest_bit(bad))
            break

    if a.n >= 3:
        sa = compute_sa(a)
    else:
        sa = 0
    nontrivial = sa == 1
    if not nontrivial:
        witnesses["nontrivial"] = tuple(sa_index_pairs(a.n, a.k)) if a.n >= 3 else ()
    return PropertyReport(symmetric, independent, additive, nontrivial, sa, witnesses)


def require_properties(a: OctMatrix, *names: str) -> PropertyReport:
    report = check_properties(a)
    missing = [nm for nm in names if not getattr(report, nm)]
    if missing:
        details = ", ".join(f"{nm} (witness {report.witnesses.get(nm)})" for nm in missing)
        raise PropertyError(f"matrix is not {details}")
    return report


_ALL = ("symmetric", "independent", "additive", "nontrivial")


def check_strong_nontriviality(a: OctMatrix):
    """Scan every copy K of [3]^{*k+1} in [n]^{*k+1} and every face alpha of K.

    For each, the sum of A[P, Q] over unordered octahedron pairs of K with
    P & Q = alpha must be 1.  Returns ``(holds_everywhere, first_failure)``
    with the failure given as ``(labels, alpha)``.
    """
    require_properties(a, "symmetric", "independent", "additive")
    n, k = a.n, a.k
    if n < 3:
        raise ValueError("need n >= 3")
    triples = list(itertools.combinations(range(1, n + 1), 3))
    m = a.m
    for labels in itertools.product(triples, repeat=k + 1):
        for alpha in itertools.product(*labels):
            others = [tuple(v for v in lab if v != c) for lab, c in zip(labels, alpha)]
            seen = set()
            s = 0
            for sides in itertools.product((0, 1), repeat=k + 1):
                p = tuple(tuple(sorted((c, o[sd]))) for c, o, sd in zip(alpha, others, sides))
                q = tuple(tuple(sorted((c, o[1 - sd]))) for c, o, sd in zip(alpha, others, sides))
                key = (p, q) if p <= q else (q, p)
                if key in seen:
                    continue
                seen.add(key)
                s ^= m[jc.oct_index(p, n), jc.oct_index(q, n)]
            if s != 1:
                return False, (labels, alpha)
    return True, None


def coordinate_block(a: OctMatrix, u: jc.Pair, v: jc.Pair) -> Gf2Matrix:
    """The block with entries A[u*P, v*Q] over (k-1)-octahedra P, Q."""
    if a.k < 1:
        raise ValueError("coordinate blocks need k >= 1")
    sub = comb(a.n, 2) ** a.k
    iu = jc.pair_index(tuple(sorted(u)), a.n)
    iv = jc.pair_index(tuple(sorted(v)), a.n)
    return block(a.m, range(iu * sub, (iu + 1) * sub), range(iv * sub, (iv + 1) * sub))


def heredity_reduce(a: OctMatrix) -> OctMatrix:
    """Z = A[{1,2}, {1,3}] + A[{1,3}, {1,2}] as an (n, k-1) matrix."""
    if a.n < 4 or a.k < 1:
        raise ValueError("heredity reduction needs n >= 4 and k >= 1")
    z = coordinate_block(a, jc.bar(2), jc.bar(3)) + coordinate_block(a, jc.bar(3), jc.bar(2))
    return OctMatrix(a.n, a.k - 1, z)


def check_one_coordinate_swap(a: OctMatrix, require_preconditions: bool = True):
    """Check A[P, Q] = A[P', Q] whenever P and Q share exactly one vertex and
    P' differs from P only in that coordinate while keeping the shared vertex.

    Returns ``(holds, witness)`` with witness ``(p, q, p_prime)`` as indices.
    Holds for every independent additive matrix; pass
    ``require_preconditions=False`` to scan arbitrary matrices.
    """
    if require_preconditions:
        require_properties(a, "independent", "additive")
    n = a.n
    octs = jc.enumerate_octahedra(n, a.k)
    m = a.m
    for pi, p in enumerate(octs):
        for qi, q in enumerate(octs):
            shared = [set(pp) & set(qq) for pp, qq in zip(p, q)]
            sizes = [len(s) for s in shared]
            if sizes.count(1) != 1 or sum(sizes) != 1:
                continue
            i = sizes.index(1)
            (c,) = shared[i]
            val = m[pi, qi]
            for z in range(1, n + 1):
                if z == c or z in q[i]:
                    continue
                p2 = p[:i] + (tuple(sorted((c, z))),) + p[i + 1:]
                p2i = jc.oct_index(p2, n)
                if m[p2i, qi] != val:
                    return False, (pi, qi, p2i)
    return True, None


def rank_lower_bound(n: int, k: int) -> int:
    return ceil(Fraction((n - 3) ** 2, 2 ** k))


@dataclass
class RankBoundReport:
    rank: int
    bound: int
    real_bound: Fraction
    passed: bool
    chain: list[dict[str, Any]]


def verify_rank_bound(a: OctMatrix) -> RankBoundReport:
    """Compare rank(a) with ceil((n-3)^2 / 2^k) and log the heredity chain.

    Each chain step records the ranks of A, of its blocks A[2,3], A[3,2]
    and of Z = A[2,3] + A[3,2], with the inequalities
    rk A >= rk A[U,V] and rk A[2,3] + rk A[3,2] >= rk Z checked.
    """
    if a.n < 4:
        raise ValueError("the rank bound needs n >= 4")
    require_properties(a, *_ALL)
    r = a.rank()
    real = Fraction((a.n - 3) ** 2, 2 ** a.k)
    bound = ceil(real)
    chain = []
    cur = a
    cur_rank = r
    while cur.k >= 2:
        b23 = coordinate_block(cur, jc.bar(2), jc.bar(3))
        b32 = coordinate_block(cur, jc.bar(3), jc.bar(2))
        r23, r32 = rank(b23), rank(b32)
        z = OctMatrix(cur.n, cur.k - 1, b23 + b32)
        rz = rank(z.m)
        zrep = check_properties(z)
        step = {
            "k": cur.k,
            "rank": cur_rank,
            "rank_block_23": r23,
            "rank_block_32": r32,
            "rank_z": rz,
            "block_le_rank": cur_rank >= r23 and cur_rank >= r32,
            "subadditive": r23 + r32 >= rz,
            "half_chain": 2 * cur_rank >= r23 + r32 >= rz,
            "z_is_nk_matrix": zrep.is_nk_matrix,
            "z_bound": rank_lower_bound(cur.n, cur.k - 1),
            "z_meets_bound": rz >= rank_lower_bound(cur.n, cur.k - 1),
        }
        chain.append(step)
        cur, cur_rank = z, rz
    passed = r >= bound and all(
        s["block_le_rank"] and s["subadditive"] and s["half_chain"] and s["z_is_nk_matrix"]
        for s in chain
    )
    return RankBoundReport(r, bound, real, passed, chain)
