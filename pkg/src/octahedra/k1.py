"""The rank certificate for (n, 1)-matrices, built from block matrices.

Pipeline: A -> B(A) (entries A[{1,i+1}*{1,a+1}, {1,j+1}*{1,b+1}]) ->
C (row addition and a submatrix of B) -> D (under-diagonal blocks made
diagonal).  Then rk A >= rk B >= rk C >= rk D - rk(C + D), where D is
tournament-like and diagonal-like and C + D has the block pattern
{0, J} strictly below the diagonal and zero elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Any, Optional, Sequence

from . import joincomplex as jc
from .gf2 import Gf2Matrix, rank
from .nkmatrix import OctMatrix, require_properties, verify_rank_bound

__all__ = [
    "BlockMatrix",
    "StructureError",
    "build_b",
    "build_c",
    "build_d",
    "classify_block",
    "is_tournament",
    "check_block_sums_diagonal",
    "check_first_row_tournament",
    "triangular_ones_rank_bound",
    "tournament_rank_check",
    "CertifyResult",
    "diag_tournament_certify",
    "certify_k1",
]


class StructureError(ValueError):
    """A block matrix lacks the structure an operation needs."""


@dataclass(frozen=True)
class BlockMatrix:
    """Square block matrix with rows and columns numbered [m_1] u ... u [m_l].

    ``labels`` optionally records, for every row, its index inside a parent
    uniform block matrix from which rows and the symmetric columns were
    removed; by default each row is its own label.
    """

    underlying: Gf2Matrix
    sizes: tuple[int, ...]
    labels: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        total = sum(self.sizes)
        if self.underlying.shape != (total, total):
            raise ValueError(f"block sizes sum to {total}, matrix is {self.underlying.shape}")
        if self.labels is not None and len(self.labels) != total:
            raise ValueError("one label per row required")

    @classmethod
    def uniform(cls, m: Gf2Matrix, ell: int, size: int) -> BlockMatrix:
        return cls(m, (size,) * ell)

    @property
    def ell(self) -> int:
        return len(self.sizes)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.sizes)) <= 1

    @property
    def offsets(self) -> list[int]:
        out = [0]
        for s in self.sizes:
            out.append(out[-1] + s)
        return out

    def row_labels(self) -> tuple[int, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(a for s in self.sizes for a in range(s))

    def index(self, i: int, a: int) -> int:
        """Flat index of row (i, a); both 1-based."""
        if not (1 <= i <= self.ell and 1 <= a <= self.sizes[i - 1]):
            raise IndexError(f"({i}, {a}) outside the block structure")
        return self.offsets[i - 1] + a - 1

    def block(self, i: int, j: int) -> Gf2Matrix:
        """Block (i, j), 1-based."""
        off = self.offsets
        r0, r1 = off[i - 1], off[i]
        c0, c1 = off[j - 1], off[j]
        mask = (1 << (c1 - c0)) - 1
        return Gf2Matrix(r1 - r0, c1 - c0, [(r >> c0) & mask for r in self.underlying.rows[r0:r1]])

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[Gf2Matrix]]) -> BlockMatrix:
        ell = len(blocks)
        sizes = tuple(blocks[i][i].nrows for i in range(ell))
        rows = []
        for i in range(ell):
            for r in range(sizes[i]):
                acc = 0
                shift = 0
                for j in range(ell):
                    acc |= blocks[i][j].rows[r] << shift
                    shift += sizes[j]
                rows.append(acc)
        total = sum(sizes)
        return cls(Gf2Matrix(total, total, rows), sizes)


def classify_block(y: Gf2Matrix) -> str:
    """'diagonal' (off-diagonal all 0), 'inversed' (off-diagonal all 1) or 'mixed'.

    The diagonal entries are ignored.  A 1x1 block counts as diagonal.
    """
    m = y.nrows
    full = (1 << m) - 1
    zero = one = True
    for a, r in enumerate(y.rows):
        off = r & ~(1 << a) & full
        if off:
            zero = False
        if off != full & ~(1 << a):
            one = False
    if zero:
        return "diagonal"
    if one:
        return "inversed"
    return "mixed"


def is_tournament(y: Gf2Matrix) -> bool:
    """Y[a, b] + Y[b, a] = 1 for all a != b; the diagonal is free."""
    if y.nrows != y.ncols:
        return False
    s = y + y.T
    full = (1 << y.nrows) - 1
    return all(r == full & ~(1 << a) for a, r in enumerate(s.rows))


def build_b(a: OctMatrix) -> BlockMatrix:
    """B[(i, a), (j, b)] = A[{1,i+1}*{1,a+1}, {1,j+1}*{1,b+1}], i, a, j, b in [n-1]."""
    if a.k != 1:
        raise ValueError("B(A) is defined for k = 1")
    n = a.n
    if n < 3:
        raise ValueError("B(A) needs n >= 3")
    idx = [jc.oct_index((jc.bar(i + 1), jc.bar(x + 1)), n)
           for i in range(1, n) for x in range(1, n)]
    src = a.m.rows
    rows = []
    for p in idx:
        r = src[p]
        acc = 0
        for col, q in enumerate(idx):
            if (r >> q) & 1:
                acc |= 1 << col
        rows.append(acc)
    size = (n - 1) ** 2
    return BlockMatrix.uniform(Gf2Matrix(size, size, rows), n - 1, n - 1)


def check_block_sums_diagonal(a: OctMatrix, require_preconditions: bool = True):
    """For pairwise distinct i, j, s in [n-1]: B[i,j] + B[s,j] is diagonal or
    inversed diagonal (its off-diagonal entries are all equal).

    Returns ``(holds, witness)`` with witness ``(i, j, s)``.
    """
    if a.n < 4:
        raise ValueError("needs n >= 4")
    if require_preconditions:
        require_properties(a, "independent", "additive")
    b = build_b(a)
    ell = b.ell
    blocks = {(i, j): b.block(i, j) for i in range(1, ell + 1) for j in range(1, ell + 1)}
    for i in range(1, ell + 1):
        for j in range(1, ell + 1):
            for s in range(1, ell + 1):
                if len({i, j, s}) < 3:
                    continue
                if classify_block(blocks[i, j] + blocks[s, j]) == "mixed":
                    return False, (i, j, s)
    return True, None


def check_first_row_tournament(a: OctMatrix):
    """For every j > 1 the block B[1, j] is a tournament matrix.

    Returns ``(holds, witness)`` with witness the first failing ``j``.
    """
    if a.n < 4:
        raise ValueError("needs n >= 4")
    require_properties(a, "symmetric", "independent", "additive", "nontrivial")
    b = build_b(a)
    for j in range(2, b.ell + 1):
        if not is_tournament(b.block(1, j)):
            return False, j
    return True, None


def build_c(b: BlockMatrix, n: int) -> BlockMatrix:
    """C[i, j] = B[i+1, j+1] + B[1, j+1] for i, j in [n-2]."""
    if b.ell != n - 1 or not b.is_uniform or b.sizes[0] != n - 1:
        raise ValueError("b must be B(A) for the same n")
    ell = n - 2
    blocks = [[b.block(i + 1, j + 1) + b.block(1, j + 1) for j in range(1, ell + 1)]
              for i in range(1, ell + 1)]
    for i in range(ell):
        for j in range(ell):
            if i != j and classify_block(blocks[i][j]) == "mixed":
                raise StructureError(
                    f"C block ({i + 1}, {j + 1}) is neither diagonal nor inversed diagonal"
                )
    return BlockMatrix.from_blocks(blocks)


def build_d(c: BlockMatrix) -> BlockMatrix:
    """D[i, j] = C[i, j] + J below the diagonal where C[i, j] is inversed
    diagonal, and D[i, j] = C[i, j] otherwise."""
    ell = c.ell
    blocks = []
    for i in range(1, ell + 1):
        row = []
        for j in range(1, ell + 1):
            cb = c.block(i, j)
            kind = classify_block(cb)
            if i != j and kind == "mixed":
                raise StructureError(f"C block ({i}, {j}) is mixed")
            if i > j and kind == "inversed":
                cb = cb + Gf2Matrix.ones(cb.nrows, cb.ncols)
            row.append(cb)
        blocks.append(row)
    return BlockMatrix.from_blocks(blocks)


def triangular_ones_rank_bound(nmat: BlockMatrix):
    """Check the pattern N[i, j] = 0 for i <= j, N[i, j] in {0, J} for i > j,
    and compare rank(N) with ell - 1.

    Returns ``(pattern_ok, rank, passed)``; raises StructureError when the
    pattern is violated.
    """
    if not nmat.is_uniform:
        raise StructureError("expected uniform blocks")
    ell = nmat.ell
    if ell == 0:
        return True, 0, True
    m = nmat.sizes[0]
    ones = Gf2Matrix.ones(m)
    zero = Gf2Matrix.zeros(m)
    for i in range(1, ell + 1):
        for j in range(1, ell + 1):
            blk = nmat.block(i, j)
            if i <= j and blk != zero:
                raise StructureError(f"block ({i}, {j}) must be zero")
            if i > j and blk not in (zero, ones):
                raise StructureError(f"block ({i}, {j}) must be 0 or J")
    r = rank(nmat.underlying)
    return True, r, r <= ell - 1


def tournament_rank_check(y: Gf2Matrix):
    """Returns ``(is_tournament, rank, passed)`` with passed iff
    rank >= ceil((m - 1) / 2)."""
    if y.nrows != y.ncols:
        raise ValueError("tournament check needs a square matrix")
    r = rank(y)
    return is_tournament(y), r, r >= y.nrows // 2


@dataclass
class CertifyResult:
    rank: int
    lower_bound: int
    target: int
    steps: list[dict[str, Any]]
    base_sizes: tuple[int, ...]
    passed: bool


def _check_structure(mat: list[int], sizes: Sequence[int], labels: Sequence[int]) -> Optional[str]:
    """None when tournament-like and diagonal-like w.r.t. ``labels``."""
    blk = [i for i, s in enumerate(sizes) for _ in range(s)]
    total = len(blk)
    for r in range(total):
        row = mat[r]
        for c in range(total):
            if blk[c] > blk[r]:
                break
            v = (row >> c) & 1
            if blk[c] == blk[r]:
                if c != r and v + ((mat[c] >> r) & 1) != 1:
                    return f"diagonal block {blk[r] + 1} is not a tournament"
            elif v and labels[r] != labels[c]:
                return f"under-diagonal block ({blk[r] + 1}, {blk[c] + 1}) is not diagonal"
    return None


def diag_tournament_certify(d: BlockMatrix) -> CertifyResult:
    """Certified rank lower bound for a tournament-like diagonal-like matrix.

    Repeatedly take the lowest row with a unit in the under-diagonal blocks
    and its leftmost unit, clear that row and column by row and column
    additions, and delete both index pairs; each step adds exactly 1 to the
    bound.  When no under-diagonal unit remains, every diagonal block is a
    tournament matrix of size m contributing ceil((m - 1) / 2).
    """
    labels = list(d.row_labels())
    sizes = list(d.sizes)
    err = _check_structure(list(d.underlying.rows), sizes, labels)
    if err:
        raise StructureError(err)
    target = ceil(Fraction(sum(s - 1 for s in sizes), 2)) if sizes else 0
    total_rank = rank(d.underlying)

    mat = list(d.underlying.rows)
    blk = [i for i, s in enumerate(sizes) for _ in range(s)]
    local = [a for s in sizes for a in range(s)]
    steps = []
    certified = 0
    while True:
        total = len(mat)
        # column range of blocks strictly left of each block
        starts = {}
        for idx, b in enumerate(blk):
            starts.setdefault(b, idx)
        pick = None
        for r in range(total - 1, -1, -1):
            under = mat[r] & ((1 << starts[blk[r]]) - 1)
            if under:
                pick = (r, (under & -under).bit_length() - 1)
                break
        if pick is None:
            break
        r, c = pick
        rowbit = 1 << c
        pivot_row = mat[r]
        for i in range(total):
            if i != r and mat[i] & rowbit:
                mat[i] ^= pivot_row
        # column c now has its only unit in row r, so clearing row r by
        # column additions changes nothing else
        mat[r] = rowbit
        before = certified
        certified += 1
        steps.append({
            "row": (blk[r] + 1, local[r] + 1),
            "column": (blk[c] + 1, local[c] + 1),
            "bound_increase": certified - before,
        })
        keep = [i for i in range(total) if i not in (r, c)]
        new = []
        for i in keep:
            row = mat[i]
            acc = 0
            for pos, j in enumerate(keep):
                if (row >> j) & 1:
                    acc |= 1 << pos
            new.append(acc)
        mat = new
        sizes[blk[r]] -= 1
        sizes[blk[c]] -= 1
        blk = [blk[i] for i in keep]
        local = [local[i] for i in keep]
        labels = [labels[i] for i in keep]
        err = _check_structure(mat, sizes, labels)
        if err:
            raise StructureError(f"reduction step {len(steps)} broke the structure: {err}")

    base = 0
    off = 0
    for s in sizes:
        sub = Gf2Matrix(s, s, [(row >> off) & ((1 << s) - 1) for row in mat[off:off + s]])
        tour, _, ok = tournament_rank_check(sub)
        if not (tour and ok):
            raise StructureError("base-case diagonal block fails the tournament bound")
        base += s // 2
        off += s
    lower = certified + base
    passed = lower >= target and total_rank >= lower
    return CertifyResult(total_rank, lower, target, steps, tuple(sizes), passed)


def certify_k1(a: OctMatrix) -> dict[str, Any]:
    """Build B, C, D for an (n, 1)-matrix and check the whole rank chain.

    rk A >= rk B >= rk C >= rk D - rk(C + D) >= (n-2)^2/2 - (n-3) >= (n-3)^2/2,
    with integer ceilings wherever a rank meets a rational bound.
    """
    if a.k != 1:
        raise ValueError("certify_k1 needs k = 1")
    n = a.n
    if n < 4:
        raise ValueError("needs n >= 4")
    require_properties(a, "symmetric", "independent", "additive", "nontrivial")
    sums_ok, sums_w = check_block_sums_diagonal(a, require_preconditions=False)
    tour_ok, tour_w = check_first_row_tournament(a)
    report: dict[str, Any] = {
        "n": n,
        "block_sums_diagonal": sums_ok,
        "block_sums_witness": sums_w,
        "first_row_tournament": tour_ok,
        "first_row_witness": tour_w,
    }
    if not (sums_ok and tour_ok):
        report["passed"] = False
        return report
    b = build_b(a)
    c = build_c(b, n)
    d = build_d(c)
    cpd = BlockMatrix(c.underlying + d.underlying, c.sizes)
    ra, rb, rc, rd = a.rank(), rank(b.underlying), rank(c.underlying), rank(d.underlying)
    _, rcd, tri_ok = triangular_ones_rank_bound(cpd)
    cert = diag_tournament_certify(d)
    d_bound = ceil(Fraction((n - 2) ** 2, 2))
    chain_value = Fraction((n - 2) ** 2, 2) - (n - 3)
    final = ceil(Fraction((n - 3) ** 2, 2))
    checks = {
        "rkA>=rkB": ra >= rb,
        "rkB>=rkC": rb >= rc,
        "rkC>=rkD-rk(C+D)": rc >= rd - rcd,
        "rk(C+D)<=n-3": tri_ok and rcd <= n - 3,
        "rkD>=ceil((n-2)^2/2)": rd >= d_bound and cert.passed and cert.lower_bound >= d_bound,
        "rkD-rk(C+D)>=ceil((n-2)^2/2)-(n-3)": rd - rcd >= d_bound - (n - 3),
        "chain>=(n-3)^2/2": chain_value >= Fraction((n - 3) ** 2, 2),
        "rkA>=ceil((n-3)^2/2)": ra >= final,
    }
    cross = verify_rank_bound(a)
    checks["agrees_with_rank_bound"] = cross.passed and cross.bound == final
    report.update({
        "rank_a": ra,
        "rank_b": rb,
        "rank_c": rc,
        "rank_d": rd,
        "rank_c_plus_d": rcd,
        "certified_d_bound": cert.lower_bound,
        "certificate_steps": len(cert.steps),
        "chain_value": chain_value,
        "final_bound": final,
        "checks": checks,
        "passed": all(checks.values()),
    })
    return report
