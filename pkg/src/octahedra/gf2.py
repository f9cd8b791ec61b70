"""Dense linear algebra over GF(2).

Rows are stored as Python integers used as bitsets: bit ``j`` of a row is
the entry in column ``j``.  Integer XOR is word-parallel, so elimination on
matrices with a few thousand columns stays cheap without any C extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

__all__ = [
    "Gf2Matrix",
    "RowReduction",
    "rank",
    "row_reduce",
    "gram",
    "block",
    "int_to_bits",
    "bits_to_int",
    "set_bits",
    "read_gf2m",
    "write_gf2m",
    "Gf2mFormatError",
]


class Gf2mFormatError(ValueError):
    """Raised for malformed GF2M matrix files."""


def set_bits(x: int) -> list[int]:
    """Positions of the set bits of ``x`` in increasing order."""
    if x == 0:
        return []
    nbytes = (x.bit_length() + 7) // 8
    bits = np.unpackbits(
        np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little"
    )
    return np.flatnonzero(bits).tolist()


def int_to_bits(x: int, width: int) -> np.ndarray:
    """Unpack ``x`` into a length-``width`` uint8 vector."""
    if width == 0:
        return np.zeros(0, dtype=np.uint8)
    nbytes = (width + 7) // 8
    bits = np.unpackbits(
        np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little"
    )
    return bits[:width]


def bits_to_int(bits: Iterable[int]) -> int:
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
    if arr.size == 0:
        return 0
    packed = np.packbits(arr & 1, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


class Gf2Matrix:
    """Immutable dense matrix over the two-element field.

    ``rows`` is a tuple of integers; every row has exactly ``ncols``
    logical bits and the bits above ``ncols`` are zero.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[int] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        rows = tuple(rows) if rows is not None else (0,) * nrows
        if len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Matrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> Gf2Matrix:
        return cls(nrows, nrows if ncols is None else ncols)

    @classmethod
    def identity(cls, m: int) -> Gf2Matrix:
        return cls(m, m, [1 << i for i in range(m)])

    @classmethod
    def ones(cls, nrows: int, ncols: int | None = None) -> Gf2Matrix:
        ncols = nrows if ncols is None else ncols
        full = (1 << ncols) - 1
        return cls(nrows, ncols, [full] * nrows)

    @classmethod
    def hyperbolic(cls, beta: int) -> Gf2Matrix:
        """Direct sum of ``beta // 2`` copies of ((0, 1), (1, 0))."""
        if beta % 2:
            raise ValueError("hyperbolic form needs an even size")
        rows = []
        for i in range(beta):
            rows.append(1 << (i + 1 if i % 2 == 0 else i - 1))
        return cls(beta, beta, rows)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> Gf2Matrix:
        nrows = len(entries)
        if ncols is None:
            ncols = len(entries[0]) if nrows else 0
        rows = []
        for row in entries:
            if len(row) != ncols:
                raise ValueError("ragged row lists")
            rows.append(bits_to_int(row))
        return cls(nrows, ncols, rows)

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> Gf2Matrix:
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        nrows, ncols = arr.shape
        if ncols == 0:
            return cls(nrows, 0)
        packed = np.packbits(arr.astype(np.uint8) & 1, axis=1, bitorder="little")
        rows = [int.from_bytes(packed[i].tobytes(), "little") for i in range(nrows)]
        return cls(nrows, ncols, rows)

    @classmethod
    def random(cls, nrows: int, ncols: int, rng: np.random.Generator) -> Gf2Matrix:
        return cls.from_numpy(rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8))

    # -- views -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            if r:
                out[i] = int_to_bits(r, self.ncols)
        return out

    def to_lists(self) -> list[list[int]]:
        return self.to_numpy().tolist()

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry ({i}, {j}) outside {self.nrows}x{self.ncols}")
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column ``j`` as a bitset over row indices."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                out |= 1 << i
        return out

    @property
    def T(self) -> Gf2Matrix:
        if self.nrows == 0 or self.ncols == 0:
            return Gf2Matrix(self.ncols, self.nrows)
        return Gf2Matrix.from_numpy(self.to_numpy().T)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.T

    def is_zero(self) -> bool:
        return not any(self.rows)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Gf2Matrix(self.nrows, self.ncols, [a ^ b for a, b in zip(self.rows, other.rows)])

    __sub__ = __add__

    def __matmul__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc = 0
            for j in set_bits(r):
                acc ^= orows[j]
            out.append(acc)
        return Gf2Matrix(self.nrows, other.ncols, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 64:
            body = "; ".join("".join(str(b) for b in row) for row in self.to_lists())
            return f"Gf2Matrix({self.nrows}x{self.ncols}: {body})"
        return f"Gf2Matrix({self.nrows}x{self.ncols})"

    def rank(self) -> int:
        return rank(self)


# -- elimination -----------------------------------------------------------


def _echelon(rows: Iterable[int]) -> dict[int, int]:
    """Forward elimination; returns pivot column -> row.

    The pivot of a row is its first (lowest) set bit.
    """
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            col = low.bit_length() - 1
            p = pivots.get(col)
            if p is None:
                pivots[col] = r
                break
            r ^= p
    return pivots


def rank(m: Gf2Matrix) -> int:
    """Row rank of ``m`` over GF(2)."""
    return len(_echelon(m.rows))


@dataclass(frozen=True)
class RowReduction:
    rank: int
    pivot_columns: list[int]
    kernel_basis: list[int]
    reduced: Gf2Matrix


def row_reduce(m: Gf2Matrix) -> RowReduction:
    """Reduced row echelon form, pivot columns and a null-space basis.

    Kernel vectors are bitsets over the columns of ``m``; there is one per
    non-pivot column, with that column set.
    """
    pivots = _echelon(m.rows)
    cols = sorted(pivots)
    # back-substitution, highest pivot first, gives the reduced form
    for idx in range(len(cols) - 1, -1, -1):
        c = cols[idx]
        bit = 1 << c
        pr = pivots[c]
        for c2 in cols[:idx]:
            if pivots[c2] & bit:
                pivots[c2] ^= pr
    reduced_rows = [pivots[c] for c in cols]
    reduced_rows += [0] * (m.nrows - len(cols))
    reduced = Gf2Matrix(m.nrows, m.ncols, reduced_rows)

    pivot_set = set(cols)
    kernel = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        fb = 1 << f
        for c in cols:
            if pivots[c] & fb:
                v |= 1 << c
        kernel.append(v)
    return RowReduction(len(cols), cols, kernel, reduced)


def gram(y: Gf2Matrix, omega: Gf2Matrix) -> Gf2Matrix:
    """Return ``y^T @ omega @ y``."""
    if omega.nrows != omega.ncols:
        raise ValueError("omega must be square")
    if omega.nrows != y.nrows:
        raise ValueError(f"omega is {omega.shape} but y has {y.nrows} rows")
    w = omega @ y
    out = [0] * y.ncols
    for r, yr in enumerate(y.rows):
        wr = w.rows[r]
        if not wr:
            continue
        for i in set_bits(yr):
            out[i] ^= wr
    return Gf2Matrix(y.ncols, y.ncols, out)


def block(m: Gf2Matrix, row_indices: Sequence[int], col_indices: Sequence[int]) -> Gf2Matrix:
    """Submatrix with entry (i, j) = m[row_indices[i], col_indices[j]]."""
    for i in row_indices:
        if not 0 <= i < m.nrows:
            raise IndexError(f"row index {i} out of range")
    for j in col_indices:
        if not 0 <= j < m.ncols:
            raise IndexError(f"column index {j} out of range")
    ncols = len(col_indices)
    if ncols == 0:
        return Gf2Matrix(len(row_indices), 0)
    # contiguous column ranges are a shift-and-mask
    start = col_indices[0]
    if list(col_indices) == list(range(start, start + ncols)):
        mask = (1 << ncols) - 1
        return Gf2Matrix(len(row_indices), ncols, [(m.rows[i] >> start) & mask for i in row_indices])
    sub = m.to_numpy()[np.ix_(list(row_indices), list(col_indices))]
    return Gf2Matrix.from_numpy(sub)


# -- GF2M text format ------------------------------------------------------


def write_gf2m(m: Gf2Matrix, fh: TextIO, meta: dict[str, object] | None = None) -> None:
    fh.write("GF2M 1\n")
    if meta:
        fh.write("meta " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    fh.write(f"rows {m.nrows} cols {m.ncols}\n")
    arr = m.to_numpy()
    for i in range(m.nrows):
        fh.write("".join("1" if b else "0" for b in arr[i]) + "\n")


def read_gf2m(fh: TextIO) -> tuple[Gf2Matrix, dict[str, str]]:
    """Parse a GF2M file; returns the matrix and the ``meta`` key/values."""
    lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "GF2M 1":
        raise Gf2mFormatError("missing 'GF2M 1' header")
    pos = 1
    meta: dict[str, str] = {}
    if pos < len(lines) and lines[pos].startswith("meta"):
        for tok in lines[pos].split()[1:]:
            if "=" not in tok:
                raise Gf2mFormatError(f"bad meta token {tok!r}")
            key, val = tok.split("=", 1)
            meta[key] = val
        pos += 1
    if pos >= len(lines):
        raise Gf2mFormatError("missing 'rows R cols C' line")
    parts = lines[pos].split()
    if len(parts) != 4 or parts[0] != "rows" or parts[2] != "cols":
        raise Gf2mFormatError(f"bad dimension line {lines[pos]!r}")
    try:
        nrows, ncols = int(parts[1]), int(parts[3])
    except ValueError as exc:
        raise Gf2mFormatError("non-integer dimensions") from exc
    if nrows < 0 or ncols < 0:
        raise Gf2mFormatError("negative dimensions")
    pos += 1
    body = lines[pos:pos + nrows]
    if len(body) != nrows or any(line.strip() for line in lines[pos + nrows:]):
        raise Gf2mFormatError(f"expected exactly {nrows} matrix rows")
    rows = []
    for line in body:
        if len(line) != ncols or set(line) - {"0", "1"}:
            raise Gf2mFormatError(f"row {line[:40]!r} is not {ncols} characters of 0/1")
        rows.append(int(line[::-1], 2) if ncols else 0)
    return Gf2Matrix(nrows, ncols, rows), meta
