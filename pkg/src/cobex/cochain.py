"""Z2 cochains, coboundary operators, quotient norms and cohomology.

Quotient norms are coset-leader weights of the coboundary space B^k.  A
``CosetTable`` stores the leader weight of every coset, indexed by syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complex import Complex
from .errors import BudgetExceeded, InvalidParameter
from .gf2 import (
    Basis,
    GF2Matrix,
    GF2Vector,
    has_rank,
    image_basis,
    kernel_basis,
    n_words,
    rank,
)

Q_MAX = 28
W_CAP = 64
UNSET = np.uint8(255)


@dataclass(frozen=True)
class Cochain:
    complex: Complex
    k: int
    vec: GF2Vector

    def __post_init__(self):
        if self.vec.length != self.complex.count(self.k) and self.k >= 0:
            raise InvalidParameter(
                f"cochain length {self.vec.length} != {self.complex.count(self.k)} cells"
            )

    @classmethod
    def from_cells(cls, x: Complex, k: int, cells) -> Cochain:
        return cls(x, k, GF2Vector.from_support(x.count(k), cells))

    @classmethod
    def from_labels(cls, x: Complex, k: int, labels) -> Cochain:
        return cls.from_cells(x, k, [x.index_of(k, lab) for lab in labels])

    def norm(self) -> int:
        return self.vec.weight()

    def support_labels(self) -> list:
        return [self.complex.labels(self.k)[i] for i in self.vec.support()]


@dataclass(frozen=True)
class CoboundaryOperator:
    k: int
    reduced: bool
    matrix: GF2Matrix
    coface_masks: tuple[int, ...]

    def __call__(self, beta: GF2Vector | Cochain) -> GF2Vector:
        vec = beta.vec if isinstance(beta, Cochain) else beta
        if vec.length != len(self.coface_masks):
            raise InvalidParameter("cochain has the wrong length for this operator")
        out = 0
        for i in vec.support():
            out ^= self.coface_masks[i]
        return GF2Vector(self.matrix.rows, out)


def coboundary(x: Complex, k: int, reduced: bool = True) -> CoboundaryOperator:
    """d_k : C^k -> C^{k+1}.  ``k == top_dim`` gives the map to the zero space."""
    lo = -1 if reduced else 0
    if not lo <= k <= x.top_dim:
        raise InvalidParameter(f"k={k} out of range [{lo}, {x.top_dim}]")
    if k == -1:
        n0 = x.count(0)
        return CoboundaryOperator(-1, True, GF2Matrix.from_incidence([[0]] * n0, 1), ((1 << n0) - 1,))
    cache = x.skeleton_cache(min(k + 1, x.top_dim))
    key = ("d", k)
    if key in cache:
        op = cache[key]
        return op if op.reduced == reduced else CoboundaryOperator(k, reduced, op.matrix, op.coface_masks)
    rows = x.boundary(k + 1) if k < x.top_dim else ()
    masks = [0] * x.count(k)
    for j, faces in enumerate(rows):
        bit = 1 << j
        for i in faces:
            masks[i] |= bit
    op = CoboundaryOperator(k, reduced, GF2Matrix.from_incidence(rows, x.count(k)), tuple(masks))
    cache[key] = op
    return op


def d(x: Complex, beta: Cochain, reduced: bool = True) -> Cochain:
    op = coboundary(x, beta.k, reduced)
    return Cochain(x, beta.k + 1, op(beta))


def coboundary_space(x: Complex, k: int, reduced: bool = True) -> Basis:
    """B^k as a basis in C^k."""
    cache = x.skeleton_cache(max(k, 0))
    key = ("B", k, reduced)
    if key not in cache:
        if k == 0 and not reduced:
            cache[key] = Basis.span(x.count(0), [])
        elif k == 0:
            cache[key] = Basis.span(x.count(0), [(1 << x.count(0)) - 1] if x.count(0) else [])
        else:
            cache[key] = image_basis(coboundary(x, k - 1, reduced).matrix)
    return cache[key]


def cocycle_space(x: Complex, k: int) -> Basis:
    return kernel_basis(coboundary(x, k, reduced=False).matrix)


def cohomology_dim(x: Complex, k: int, reduced: bool = True) -> int:
    if not 0 <= k <= x.top_dim:
        raise InvalidParameter(f"k={k} out of range")
    n_k = x.count(k)
    z = n_k - (rank(coboundary(x, k, reduced).matrix) if k < x.top_dim else 0)
    return z - coboundary_space(x, k, reduced).dim


def cohomology_vanishes(x: Complex, k: int, reduced: bool = True) -> bool:
    """H^k == 0, with early exits for large complexes.

    A k-cell with no cofaces gives a cocycle; if that indicator is not a
    coboundary the answer is already known.
    """
    b = coboundary_space(x, k, reduced)
    if k < x.top_dim:
        for i, cf in enumerate(x.cofaces(k)):
            if not cf and not b.contains(1 << i):
                return False
        return has_rank(coboundary(x, k, reduced).matrix, x.count(k) - b.dim)
    return x.count(k) == b.dim


# -- coset tables ---------------------------------------------------------------


@dataclass
class CosetTable:
    """Leader weights of all cosets of ``code`` in GF(2)^length.

    Syndrome ``s`` (a q-bit integer) names the coset containing the vector
    that has bit ``j`` of ``s`` at position ``free_columns[j]`` and zeros
    elsewhere.  Entries above ``w_cap`` were not reached; they hold
    ``w_cap + 1``, a certified lower bound.
    """

    code: Basis
    length: int
    free_columns: tuple[int, ...]
    unit_syndromes: np.ndarray
    leader_weight: np.ndarray
    w_cap: int

    @property
    def q(self) -> int:
        return len(self.free_columns)

    @property
    def resolved(self) -> np.ndarray:
        return self.leader_weight <= self.w_cap

    @property
    def fully_resolved(self) -> bool:
        return bool(self.resolved.all())

    def syndrome(self, v: GF2Vector | int) -> int:
        bits = v.bits if isinstance(v, GF2Vector) else v
        s = 0
        while bits:
            low = bits & -bits
            s ^= int(self.unit_syndromes[low.bit_length() - 1])
            bits ^= low
        return s

    def representative(self, s: int) -> GF2Vector:
        bits = 0
        for j, c in enumerate(self.free_columns):
            if (s >> j) & 1:
                bits |= 1 << c
        return GF2Vector(self.length, bits)

    def weight(self, v: GF2Vector | int) -> int:
        return int(self.leader_weight[self.syndrome(v)])

    def is_resolved(self, s: int) -> bool:
        return int(self.leader_weight[s]) <= self.w_cap

    def leader(self, s: int) -> GF2Vector:
        """Minimum-weight member of coset ``s`` with lexicographically least support."""
        w = int(self.leader_weight[s])
        if w > self.w_cap:
            raise BudgetExceeded(f"coset {s} not resolved within w_cap={self.w_cap}", self.q)
        bits = 0
        start = 0
        while w:
            for i in range(start, self.length):
                t = s ^ int(self.unit_syndromes[i])
                if int(self.leader_weight[t]) == w - 1:
                    bits |= 1 << i
                    s, w, start = t, w - 1, i + 1
                    break
            else:  # pragma: no cover - table inconsistent
                raise RuntimeError("coset table is inconsistent")
        return GF2Vector(self.length, bits)


def _syndrome_map(code: Basis) -> tuple[tuple[int, ...], np.ndarray]:
    free = code.free_columns()
    pos = {c: j for j, c in enumerate(free)}
    syn = np.zeros(code.length, dtype=np.int64)
    for c, j in pos.items():
        syn[c] = 1 << j
    for vec, p in zip(code.vectors, code.pivot_columns):
        s = 0
        for c in vec.support():
            if c != p:
                s |= 1 << pos[c]
        syn[p] = s
    return tuple(free), syn


def build_coset_table(code: Basis, length: int | None = None, w_cap: int = W_CAP,
                      q_max: int = Q_MAX) -> CosetTable:
    """Leader weight of every coset of ``code``.

    Cosets are reached in order of leader weight: the weight-w layer consists
    of syndromes first hit by adding one unit vector to a weight-(w-1)
    syndrome.  This records the same first-seen weight per syndrome as
    enumerating all vectors by increasing weight.
    """
    length = code.length if length is None else length
    if length != code.length:
        raise InvalidParameter("code length mismatch")
    if not 0 <= w_cap < 255:
        raise InvalidParameter("w_cap must be in [0, 254]")
    free, syn = _syndrome_map(code)
    q = len(free)
    if q > q_max:
        raise BudgetExceeded(f"quotient dimension q={q} exceeds q_max={q_max}", q)
    table = np.full(1 << q, UNSET, dtype=np.uint8)
    table[0] = 0
    gens = np.unique(syn[syn != 0])
    frontier = np.zeros(1, dtype=np.int64)
    w = 0
    seen = 1
    while frontier.size and seen < table.size and w < w_cap:
        w += 1
        for g in gens:
            nb = frontier ^ g
            nb = nb[table[nb] == UNSET]
            table[nb] = w
        frontier = np.flatnonzero(table == w)
        seen += frontier.size
    table[table == UNSET] = w_cap + 1
    return CosetTable(code, length, free, syn, table, w_cap)


def coset_table(x: Complex, k: int, reduced: bool = True, w_cap: int = W_CAP,
                q_max: int = Q_MAX) -> CosetTable:
    """Cached coset table of B^k; shared by all complexes with the same k-skeleton."""
    cache = x.skeleton_cache(max(k, 0))
    key = ("coset", k, reduced, w_cap)
    table = cache.get(key)
    if table is None:
        table = build_coset_table(coboundary_space(x, k, reduced), x.count(k), w_cap, q_max)
        cache[key] = table
    return table


def leader_weight_by_code(code: Basis, v: GF2Vector | int) -> int:
    """Exact coset-leader weight by scanning all 2^dim code words."""
    bits = v.bits if isinstance(v, GF2Vector) else v
    words = GF2Vector(code.length, bits).words()
    return int(np.bitwise_count(code.elements() ^ words).sum(axis=1).min())


def quotient_norm(x: Complex, k: int, beta: Cochain | GF2Vector, reduced: bool = True,
                  q_max: int = Q_MAX, w_cap: int = W_CAP, code_max: int = 22) -> int:
    """min over alpha of |beta + d alpha|.

    Uses the coset table when q <= q_max, otherwise scans the code itself if
    its dimension is at most ``code_max``.
    """
    vec = beta.vec if isinstance(beta, Cochain) else beta
    code = coboundary_space(x, k, reduced)
    q = code.length - code.dim
    if q <= q_max and (q <= code.dim or code.dim > code_max):
        table = coset_table(x, k, reduced, w_cap, q_max)
        s = table.syndrome(vec)
        if not table.is_resolved(s):
            raise BudgetExceeded(
                f"leader weight exceeds w_cap={w_cap} (lower bound {w_cap + 1})", q)
        return int(table.leader_weight[s])
    if code.dim <= code_max:
        return leader_weight_by_code(code, vec)
    raise BudgetExceeded(f"q={q} > q_max={q_max} and code dimension {code.dim} too large", q)


def quotient_norm_exhaustive(x: Complex, k: int, beta: Cochain | GF2Vector,
                             reduced: bool = True) -> int:
    """Reference value: minimum of |beta + d alpha| over every alpha in C^{k-1}."""
    vec = beta.vec if isinstance(beta, Cochain) else beta
    if k == 0 and not reduced:
        return vec.weight()
    op = coboundary(x, k - 1, reduced)
    n = len(op.coface_masks)
    best = vec.weight()
    for a in range(1 << n):
        img = 0
        for i in range(n):
            if (a >> i) & 1:
                img ^= op.coface_masks[i]
        best = min(best, (vec.bits ^ img).bit_count())
    return best


def naive_coset_weights(code: Basis, w_cap: int | None = None) -> dict[int, int]:
    """Leader weight per syndrome by literally walking vectors in weight order."""
    free, syn = _syndrome_map(code)
    q = len(free)
    out: dict[int, int] = {}
    top = code.length if w_cap is None else min(w_cap, code.length)
    for w in range(top + 1):
        for supp in combinations(range(code.length), w):
            s = 0
            for i in supp:
                s ^= int(syn[i])
            out.setdefault(s, w)
        if len(out) == 1 << q:
            break
    return out


def coface_words(x: Complex, k: int, columns) -> np.ndarray:
    """Packed coboundary images d(e_c) for the given k-cells."""
    op = coboundary(x, k)
    w = n_words(op.matrix.rows)
    out = np.zeros((len(columns), w), dtype=np.uint64)
    for j, c in enumerate(columns):
        out[j] = GF2Vector(op.matrix.rows, op.coface_masks[c]).words()
    return out
