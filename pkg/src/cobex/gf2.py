"""Exact linear algebra over GF(2).

Vectors are Python ints used as bitsets (bit ``i`` is coordinate ``i``).
Matrices keep their rows packed into little-endian ``uint64`` words so that
elimination is a sequence of vectorized row XORs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

WORD = 64


def n_words(nbits: int) -> int:
    return max(1, (nbits + WORD - 1) // WORD)


def int_to_words(x: int, words: int) -> np.ndarray:
    return np.frombuffer(x.to_bytes(words * 8, "little"), dtype="<u8").astype(np.uint64)


def words_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


def popcount_rows(a: np.ndarray) -> np.ndarray:
    """Number of set bits in each row of a packed 2-D array."""
    return np.bitwise_count(a).sum(axis=1, dtype=np.int64)


@dataclass(frozen=True)
class GF2Vector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits beyond length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> GF2Vector:
        return cls(length, 0)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> GF2Vector:
        bits = 0
        for i in support:
            if not 0 <= i < length:
                raise IndexError(i)
            bits ^= 1 << i
        return cls(length, bits)

    @classmethod
    def from_string(cls, s: str) -> GF2Vector:
        """Parse ``"0110"``; the first character is coordinate 0."""
        return cls.from_support(len(s), (i for i, ch in enumerate(s) if ch == "1"))

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        out = []
        x = self.bits
        while x:
            low = x & -x
            out.append(low.bit_length() - 1)
            x ^= low
        return out

    def words(self) -> np.ndarray:
        return int_to_words(self.bits, n_words(self.length))

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: GF2Vector) -> GF2Vector:
        if self.length != other.length:
            raise ValueError("length mismatch")
        return GF2Vector(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def __and__(self, other: GF2Vector) -> GF2Vector:
        if self.length != other.length:
            raise ValueError("length mismatch")
        return GF2Vector(self.length, self.bits & other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.length))


class GF2Matrix:
    """Dense bit-packed matrix; ``data[r]`` holds row ``r``."""

    def __init__(self, data: np.ndarray, rows: int, cols: int):
        data = np.asarray(data, dtype=np.uint64)
        if data.shape != (rows, n_words(cols)):
            raise ValueError(f"storage {data.shape} does not match {rows}x{cols}")
        self.data = data
        self.rows = rows
        self.cols = cols

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> GF2Matrix:
        return cls(np.zeros((rows, n_words(cols)), dtype=np.uint64), rows, cols)

    @classmethod
    def identity(cls, n: int) -> GF2Matrix:
        return cls.from_incidence([[i] for i in range(n)], n)

    @classmethod
    def from_rows(cls, rows: Sequence[int | GF2Vector], cols: int) -> GF2Matrix:
        w = n_words(cols)
        data = np.zeros((len(rows), w), dtype=np.uint64)
        for r, x in enumerate(rows):
            bits = x.bits if isinstance(x, GF2Vector) else x
            if bits >> cols:
                raise ValueError(f"row {r} has bits beyond column {cols}")
            if bits:
                data[r] = int_to_words(bits, w)
        return cls(data, len(rows), cols)

    @classmethod
    def from_incidence(cls, index_lists: Sequence[Sequence[int]], cols: int) -> GF2Matrix:
        """Row ``r`` has ones at ``index_lists[r]`` (indices taken mod 2)."""
        rows = len(index_lists)
        data = np.zeros((rows, n_words(cols)), dtype=np.uint64)
        lengths = [len(ix) for ix in index_lists]
        if sum(lengths):
            r_idx = np.repeat(np.arange(rows), lengths)
            c_idx = np.fromiter((c for ix in index_lists for c in ix), dtype=np.int64)
            if c_idx.min() < 0 or c_idx.max() >= cols:
                raise ValueError("column index out of range")
            bits = np.left_shift(np.uint64(1), (c_idx % WORD).astype(np.uint64))
            np.bitwise_xor.at(data, (r_idx, c_idx // WORD), bits)
        return cls(data, rows, cols)

    @classmethod
    def from_dense(cls, a) -> GF2Matrix:
        a = np.asarray(a, dtype=np.uint8) & 1
        rows, cols = a.shape
        return cls(_pack_bits(a, cols), rows, cols)

    def to_dense(self) -> np.ndarray:
        return _unpack_bits(self.data, self.cols)

    def copy(self) -> GF2Matrix:
        return GF2Matrix(self.data.copy(), self.rows, self.cols)

    def row(self, i: int) -> GF2Vector:
        return GF2Vector(self.cols, words_to_int(self.data[i]))

    def row_ints(self) -> list[int]:
        return [words_to_int(r) for r in self.data]

    def transpose(self) -> GF2Matrix:
        return GF2Matrix(_pack_bits(self.to_dense().T, self.rows), self.cols, self.rows)

    @property
    def T(self) -> GF2Matrix:
        return self.transpose()

    def __matmul__(self, x: GF2Vector) -> GF2Vector:
        if not isinstance(x, GF2Vector):
            return NotImplemented
        if x.length != self.cols:
            raise ValueError(f"vector length {x.length} != {self.cols} columns")
        if self.rows == 0:
            return GF2Vector(0, 0)
        parity = popcount_rows(self.data & x.words()) & 1
        return GF2Vector.from_support(self.rows, np.flatnonzero(parity).tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"GF2Matrix({self.rows}x{self.cols})"


def _pack_bits(a: np.ndarray, cols: int) -> np.ndarray:
    rows = a.shape[0]
    w = n_words(cols)
    padded = np.zeros((rows, w * WORD), dtype=np.uint8)
    padded[:, :cols] = a
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64)


def _unpack_bits(data: np.ndarray, cols: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(data, dtype="<u8").view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


@dataclass(frozen=True)
class Basis:
    """Subspace basis in reduced row-echelon form.

    Each vector's pivot is its lowest set bit and every other basis vector is
    zero there, so two bases of the same subspace compare equal.
    """

    length: int
    vectors: tuple[GF2Vector, ...]
    pivot_columns: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @classmethod
    def span(cls, length: int, vectors: Iterable[int | GF2Vector]) -> Basis:
        rows = [v.bits if isinstance(v, GF2Vector) else v for v in vectors]
        reduced, pivots = rref(GF2Matrix.from_rows(rows, length))
        vecs = tuple(GF2Vector(length, x) for x in reduced.row_ints()[: len(pivots)])
        return cls(length, vecs, tuple(pivots))

    def reduce(self, v: GF2Vector | int) -> int:
        """Remainder of ``v`` after clearing every pivot position."""
        x = v.bits if isinstance(v, GF2Vector) else v
        for vec, p in zip(self.vectors, self.pivot_columns):
            if (x >> p) & 1:
                x ^= vec.bits
        return x

    def contains(self, v: GF2Vector | int) -> bool:
        return self.reduce(v) == 0

    def free_columns(self) -> list[int]:
        pivots = set(self.pivot_columns)
        return [c for c in range(self.length) if c not in pivots]

    def elements(self) -> np.ndarray:
        """All 2^dim members as a packed (2^dim, words) array."""
        w = n_words(self.length)
        out = np.zeros((1 << self.dim, w), dtype=np.uint64)
        for j, v in enumerate(self.vectors):
            half = 1 << j
            out[half : 2 * half] = out[:half] ^ v.words()
        return out


def rref(m: GF2Matrix) -> tuple[GF2Matrix, list[int]]:
    """Reduced row-echelon form; returns the reduced matrix and pivot columns.

    The nonzero rows come first, in pivot order.
    """
    a = m.data.copy()
    pivots = _rref_inplace(a, m.cols)
    return GF2Matrix(a, m.rows, m.cols), pivots


def _rref_inplace(a: np.ndarray, cols: int, pivot_limit: int | None = None) -> list[int]:
    rows = a.shape[0]
    limit = cols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        w, b = divmod(c, WORD)
        bit = np.uint64(1 << b)
        hits = np.flatnonzero(a[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, w] & bit)
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return pivots


def _echelon_rank(a: np.ndarray, max_deficiency: int | None = None) -> int:
    """Forward elimination row by row; destroys ``a``.

    Returns the rank, or -1 as soon as more than ``max_deficiency`` rows have
    reduced to zero.
    """
    rows = a.shape[0]
    rank = 0
    zero = 0
    for i in range(rows):
        row = a[i]
        nz = np.flatnonzero(row)
        if nz.size == 0:
            zero += 1
            if max_deficiency is not None and zero > max_deficiency:
                return -1
            continue
        w = int(nz[0])
        word = int(row[w])
        low = np.uint64(word & -word)
        below = np.flatnonzero(a[i + 1 :, w] & low)
        if below.size:
            a[below + i + 1] ^= row
        rank += 1
    return rank


def rank(m: GF2Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # iterate along the shorter side
    a = m.transpose().data if m.rows > m.cols else m.data.copy()
    return _echelon_rank(a)


def has_rank(m: GF2Matrix, target: int) -> bool:
    """True iff ``rank(m) >= target``; stops early once that is impossible."""
    short = min(m.rows, m.cols)
    if target <= 0:
        return True
    if target > short:
        return False
    a = m.transpose().data if m.rows > m.cols else m.data.copy()
    return _echelon_rank(a, max_deficiency=short - target) >= target


def kernel_basis(m: GF2Matrix) -> Basis:
    reduced, pivots = rref(m)
    rows = reduced.row_ints()
    pivot_set = set(pivots)
    vecs = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        x = 1 << f
        for r, p in enumerate(pivots):
            if (rows[r] >> f) & 1:
                x |= 1 << p
        vecs.append(x)
    return Basis.span(m.cols, vecs)


def image_basis(m: GF2Matrix) -> Basis:
    """Basis of the column space, as vectors of length ``m.rows``."""
    return Basis.span(m.rows, m.transpose().row_ints())


def row_space_basis(m: GF2Matrix) -> Basis:
    return Basis.span(m.cols, m.row_ints())


def solve(m: GF2Matrix, b: GF2Vector) -> GF2Vector | None:
    """One solution of ``m x = b`` (free variables set to 0), or None."""
    if b.length != m.rows:
        raise ValueError(f"rhs length {b.length} != {m.rows} rows")
    aug_cols = m.cols + 1
    a = np.zeros((m.rows, n_words(aug_cols)), dtype=np.uint64)
    a[:, : m.data.shape[1]] = m.data
    w, bit = divmod(m.cols, WORD)
    rhs = np.fromiter(b, dtype=np.uint64, count=b.length) if m.rows else np.zeros(0, np.uint64)
    a[:, w] |= rhs << np.uint64(bit)
    pivots = _rref_inplace(a, aug_cols, pivot_limit=m.cols)
    rhs_col = (a[:, w] >> np.uint64(bit)) & np.uint64(1)
    if rhs_col[len(pivots) :].any():
        return None
    x = 0
    for r, p in enumerate(pivots):
        if rhs_col[r]:
            x |= 1 << p
    return GF2Vector(m.cols, x)


def enumerate_by_weight(length: int, w_max: int) -> Iterator[GF2Vector]:
    """All vectors of weight 0..w_max; lexicographic by support within a weight."""
    if not 0 <= w_max <= length:
        raise ValueError(f"w_max={w_max} outside [0, {length}]")
    for w in range(w_max + 1):
        for supp in combinations(range(length), w):
            yield GF2Vector.from_support(length, supp)
