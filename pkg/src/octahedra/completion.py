"""The affine space of all (n, k)-matrices and minimum-rank search over it.

Unknowns are the entries A[P, Q] for unordered octahedron pairs {P, Q}
(including P = Q), so symmetry holds by construction.  The linear
conditions are:

* independence: A[P, Q] = 0 for vertex-disjoint P, Q;
* additivity: A[P, Q] + A[X, Q] + A[Y, Q] = 0 for every exhaustive
  decomposition faces(P) = faces(X) xor faces(Y) and every Q;
* non-triviality: the SA sum equals 1.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import joincomplex as jc
from .gf2 import Gf2Matrix, _echelon, gram, int_to_bits, set_bits
from .nkmatrix import OctMatrix, check_properties, rank_lower_bound

log = logging.getLogger(__name__)

__all__ = [
    "ConstraintSystem",
    "SolutionSpace",
    "SearchConfig",
    "MinRankResult",
    "InfeasibleError",
    "BudgetExhausted",
    "var_index",
    "build_system",
    "solve_space",
    "sample",
    "min_rank_search",
    "gram_construct",
    "write_nksys",
    "read_nksys",
    "NksysFormatError",
]


class InfeasibleError(RuntimeError):
    """The constraint system has no solution."""


class BudgetExhausted(RuntimeError):
    """A heuristic search was asked to run with no budget."""


class NksysFormatError(ValueError):
    pass


def var_index(p: int, q: int, count: int) -> int:
    """Variable number of the unordered index pair {p, q} (upper triangle, row-major)."""
    if p > q:
        p, q = q, p
    return p * count - p * (p - 1) // 2 + (q - p)


@dataclass
class ConstraintSystem:
    n: int
    k: int
    nvars: int
    equations: list[tuple[tuple[int, ...], int]]

    @property
    def count(self) -> int:
        """Number of octahedra."""
        return jc.octahedron_count(self.n, self.k)

    @cached_property
    def var_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays mapping variable number to its (p, q), p <= q."""
        c = self.count
        iu = np.triu_indices(c)
        return iu[0], iu[1]

    def with_equation(self, variables: Iterable[int], rhs: int) -> ConstraintSystem:
        return ConstraintSystem(
            self.n, self.k, self.nvars, self.equations + [(tuple(sorted(variables)), rhs & 1)]
        )


def build_system(n: int, k: int) -> ConstraintSystem:
    if n < 4:
        raise ValueError("the constraint system needs n >= 4")
    if k < 0:
        raise ValueError("k must be non-negative")
    octs = jc.enumerate_octahedra(n, k)
    count = len(octs)
    nvars = count * (count + 1) // 2

    indep = []
    for pi, p in enumerate(octs):
        for qi in range(pi + 1, count):
            if jc.vertex_disjoint(p, octs[qi]):
                indep.append(((var_index(pi, qi, count),), 0))

    additive = set()
    for p, x, y in jc.decomposition_table(n, k):
        for q in range(count):
            vs = {var_index(p, q, count)}
            vs ^= {var_index(x, q, count)}
            vs ^= {var_index(y, q, count)}
            if vs:
                additive.add(tuple(sorted(vs)))

    sa_vars = set()
    for p, q in jc.g_pairs(k):
        sa_vars ^= {var_index(jc.oct_index(p, n), jc.oct_index(q, n), count)}

    equations = indep + [(vs, 0) for vs in sorted(additive)] + [(tuple(sorted(sa_vars)), 1)]
    return ConstraintSystem(n, k, nvars, equations)


@dataclass
class SolutionSpace:
    system: ConstraintSystem
    particular: int
    kernel: list[int]

    @property
    def dimension(self) -> int:
        return len(self.kernel)

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def k(self) -> int:
        return self.system.k

    def point(self, coeffs: int) -> int:
        """Particular solution plus the kernel combination selected by ``coeffs``."""
        x = self.particular
        for j in set_bits(coeffs):
            x ^= self.kernel[j]
        return x

    def decode_rows(self, x: int) -> list[int]:
        ps, qs = self.system.var_pairs
        rows = [0] * self.system.count
        for v in set_bits(x):
            p, q = int(ps[v]), int(qs[v])
            rows[p] ^= 1 << q
            if p != q:
                rows[q] ^= 1 << p
        return rows

    def decode(self, x: int) -> OctMatrix:
        c = self.system.count
        return OctMatrix(self.n, self.k, Gf2Matrix(c, c, self.decode_rows(x)))


def _var_weights(system: ConstraintSystem) -> np.ndarray:
    """Number of octahedron parts avoiding vertex 1, summed over both sides."""
    octs = jc.enumerate_octahedra(system.n, system.k)
    w = np.array([sum(1 not in part for part in p) for p in octs], dtype=np.int64)
    ps, qs = system.var_pairs
    return w[ps] + w[qs]


def solve_space(system: ConstraintSystem) -> SolutionSpace:
    """Gaussian elimination of the system into particular solution + kernel.

    Columns are ordered so that pairs of octahedra whose parts avoid vertex
    1 are eliminated first; additivity then rewrites them through pairs of
    {1, x} parts, which keeps rows sparse.  The order only affects speed.
    """
    nv = system.nvars
    weights = _var_weights(system)
    order = np.lexsort((np.arange(nv), weights))  # position -> variable
    pos_of = np.empty(nv, dtype=np.int64)
    pos_of[order] = np.arange(nv)

    # bit 0 carries the right-hand side; variable at position i is bit i + 1
    pivots: dict[int, int] = {}
    for variables, rhs in system.equations:
        r = rhs & 1
        for v in variables:
            r ^= 1 << (int(pos_of[v]) + 1)
        while r > 1:
            hb = r.bit_length() - 1
            p = pivots.get(hb)
            if p is None:
                pivots[hb] = r
                break
            r ^= p
        if r == 1:
            raise InfeasibleError(
                f"(n={system.n}, k={system.k}) constraint system is inconsistent"
            )

    reduced: dict[int, int] = {}
    for hb in sorted(pivots):
        row = pivots[hb]
        top = 1 << hb
        for b in set_bits(row ^ top):
            if b and b in reduced:
                row ^= reduced[b] ^ (1 << b)
        reduced[hb] = row

    particular_pos = 0
    kernel_pos: dict[int, int] = {}
    for hb, row in reduced.items():
        if row & 1:
            particular_pos |= 1 << hb
        for b in set_bits(row ^ (1 << hb)):
            if b:
                kernel_pos[b] = kernel_pos.get(b, 1 << b) | (1 << hb)
    free = [b for b in range(1, nv + 1) if b not in reduced]
    for b in free:
        kernel_pos.setdefault(b, 1 << b)

    def to_vars(x: int) -> int:
        bits = int_to_bits(x >> 1, nv)
        out = np.zeros(nv, dtype=np.uint8)
        out[order] = bits
        return _pack(out)

    kernel = [to_vars(kernel_pos[b]) for b in sorted(free)]
    # canonical order: by lowest variable of each vector, then value
    kernel.sort(key=lambda v: ((v & -v).bit_length(), v))
    space = SolutionSpace(system, to_vars(particular_pos), kernel)
    log.debug("(n=%d, k=%d): %d pivots, kernel dimension %d",
              system.n, system.k, len(reduced), len(kernel))
    return space


def _pack(bits: np.ndarray) -> int:
    if bits.size == 0:
        return 0
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _ordered_map(fn, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def sample(space: SolutionSpace, seed: int, count: int, threads: int = 1) -> list[OctMatrix]:
    """``count`` seeded random members of the solution space.

    Coefficients are drawn sequentially from one seeded generator before any
    decoding, so the result does not depend on ``threads``.
    """
    rng = random.Random(seed)
    coeffs = [rng.getrandbits(space.dimension) if space.dimension else 0 for _ in range(count)]
    return _ordered_map(lambda c: space.decode(space.point(c)), coeffs, threads)


MAX_EXHAUSTIVE_DIM = 26


@dataclass
class SearchConfig:
    seed: int = 0
    budget: int = 2000
    exhaustive_threshold: int = 20
    restarts: int = 4

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if not 0 <= self.exhaustive_threshold <= MAX_EXHAUSTIVE_DIM:
            raise ValueError(f"exhaustive_threshold must lie in [0, {MAX_EXHAUSTIVE_DIM}]")


@dataclass
class MinRankResult:
    best_rank: int
    witness: OctMatrix
    method: str
    evaluated: int
    bound: int
    coeffs: int = 0
    trace: list[int] = field(default_factory=list)


def _rows_rank(rows: Sequence[int]) -> int:
    return len(_echelon(rows))


def _exhaustive(space: SolutionSpace, threads: int) -> tuple[int, int, int]:
    dim = space.dimension
    base = space.decode_rows(space.particular)
    kern = [space.decode_rows(v) for v in space.kernel]
    total = 1 << dim
    nchunks = max(1, min(threads, total))
    bounds = [total * i // nchunks for i in range(nchunks + 1)]

    def run(chunk: int) -> tuple[int, int]:
        lo, hi = bounds[chunk], bounds[chunk + 1]
        g = lo ^ (lo >> 1)
        cur = list(base)
        for j in set_bits(g):
            cur = [a ^ b for a, b in zip(cur, kern[j])]
        best = (_rows_rank(cur), g)
        for i in range(lo + 1, hi):
            flip = (i & -i).bit_length() - 1
            g ^= 1 << flip
            cur = [a ^ b for a, b in zip(cur, kern[flip])]
            r = _rows_rank(cur)
            if r < best[0]:
                best = (r, g)
        return best

    results = _ordered_map(run, list(range(nchunks)), threads)
    best_rank, best_coeffs = min(results, key=lambda t: t[0])
    return best_rank, best_coeffs, total


def _hill_climb(space: SolutionSpace, config: SearchConfig, threads: int):
    dim = space.dimension
    per_chain = [config.budget // config.restarts + (1 if i < config.budget % config.restarts else 0)
                 for i in range(config.restarts)]
    kern = [space.decode_rows(v) for v in space.kernel]
    base = space.decode_rows(space.particular)

    def chain(idx: int) -> tuple[int, int, list[int]]:
        rng = random.Random(f"{config.seed}/{idx}")
        coeffs = rng.getrandbits(dim)
        cur = list(base)
        for j in set_bits(coeffs):
            cur = [a ^ b for a, b in zip(cur, kern[j])]
        r = _rows_rank(cur)
        best = (r, coeffs)
        trace = [r]
        for _ in range(max(per_chain[idx] - 1, 0)):
            j = rng.randrange(dim)
            cand = [a ^ b for a, b in zip(cur, kern[j])]
            rc = _rows_rank(cand)
            if rc <= r:
                cur, r, coeffs = cand, rc, coeffs ^ (1 << j)
                if r < best[0]:
                    best = (r, coeffs)
            trace.append(r)
        return best[0], best[1], trace

    chains = [i for i in range(config.restarts) if per_chain[i] > 0]
    results = _ordered_map(chain, chains, threads)
    best_rank, best_coeffs, _ = min(results, key=lambda t: t[0])
    trace = [r for res in results for r in res[2]]
    return best_rank, best_coeffs, sum(per_chain), trace


def min_rank_search(space: SolutionSpace, config: SearchConfig | None = None,
                    threads: int = 1) -> MinRankResult:
    """Lowest rank found in the space.

    Exhaustive over the coset when the kernel dimension is at most
    ``config.exhaustive_threshold``; otherwise seeded bit-flip hill climbing
    (flip one kernel coordinate, keep the move if rank does not grow) with
    ``config.restarts`` independent chains sharing the iteration budget.
    Heuristic results are the best found, not a certified minimum.
    """
    config = config or SearchConfig()
    bound = rank_lower_bound(space.n, space.k) if space.n >= 4 else 0
    trace: list[int] = []
    if space.dimension <= config.exhaustive_threshold:
        best, coeffs, evaluated = _exhaustive(space, threads)
        method = "exhaustive"
    else:
        if config.budget == 0:
            raise BudgetExhausted("heuristic search needs a positive budget")
        best, coeffs, evaluated, trace = _hill_climb(space, config, threads)
        method = "heuristic"
    witness = space.decode(space.point(coeffs))
    report = check_properties(witness)
    if not report.is_nk_matrix:
        raise RuntimeError(f"search witness fails {report.failed()}")
    if witness.rank() != best:
        raise RuntimeError("witness rank disagrees with search bookkeeping")
    if best < bound:
        raise RuntimeError(
            f"found rank {best} below the proven lower bound {bound}; this is a bug"
        )
    return MinRankResult(best, witness, method, evaluated, bound, coeffs, trace)


def gram_construct(beta: int, form: str, y: Gf2Matrix, n: int, k: int) -> OctMatrix:
    """A = y^T Omega y with Omega the identity or a sum of hyperbolic blocks."""
    if form == "identity":
        omega = Gf2Matrix.identity(beta)
    elif form == "hyperbolic":
        if beta % 2:
            raise ValueError("the hyperbolic form needs an even beta")
        omega = Gf2Matrix.hyperbolic(beta)
    else:
        raise ValueError(f"unknown form {form!r}")
    count = jc.octahedron_count(n, k)
    if y.shape != (beta, count):
        raise ValueError(f"y must be {beta}x{count}, got {y.shape}")
    return OctMatrix(n, k, gram(y, omega))


# -- NKSYS text format -----------------------------------------------------


def write_nksys(system: ConstraintSystem, fh: TextIO) -> None:
    fh.write("NKSYS 1\n")
    fh.write(f"n {system.n} k {system.k}\n")
    fh.write(f"vars {system.nvars}\n")
    for variables, rhs in system.equations:
        fh.write(" ".join(map(str, variables)) + f" = {rhs}\n")


def read_nksys(fh: TextIO) -> ConstraintSystem:
    lines = fh.read().splitlines()
    if len(lines) < 3 or lines[0].strip() != "NKSYS 1":
        raise NksysFormatError("missing 'NKSYS 1' header")
    try:
        tag_n, n, tag_k, k = lines[1].split()
        tag_v, nvars = lines[2].split()
        n, k, nvars = int(n), int(k), int(nvars)
    except ValueError as exc:
        raise NksysFormatError("bad header lines") from exc
    if (tag_n, tag_k, tag_v) != ("n", "k", "vars"):
        raise NksysFormatError("bad header tags")
    if nvars != comb(jc.octahedron_count(n, k) + 1, 2):
        raise NksysFormatError(f"vars {nvars} does not match (n={n}, k={k})")
    equations = []
    for line in lines[3:]:
        if not line.strip():
            continue
        lhs, sep, rhs = line.rpartition("=")
        if not sep or rhs.strip() not in ("0", "1"):
            raise NksysFormatError(f"bad equation line {line!r}")
        try:
            variables = tuple(int(t) for t in lhs.split())
        except ValueError as exc:
            raise NksysFormatError(f"bad variable in {line!r}") from exc
        if any(not 0 <= v < nvars for v in variables) or list(variables) != sorted(set(variables)):
            raise NksysFormatError(f"variables out of range or unsorted in {line!r}")
        equations.append((variables, int(rhs)))
    return ConstraintSystem(n, k, nvars, equations)

