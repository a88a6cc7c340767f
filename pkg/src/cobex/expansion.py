"""Exact coboundary expansion, edge expansion and filling norms.

Both the numerator |d beta| and the denominator ||[beta]|| of the expansion
ratio depend only on the coset beta + B^k, so the solver visits each coset
once.  Coset representatives are spanned by unit vectors on the free
(non-pivot) columns of B^k; their coboundaries are built by doubling, one
XOR per coset, in chunks of 2^20.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import numpy as np

from .cochain import (
    Q_MAX,
    W_CAP,
    Cochain,
    CosetTable,
    build_coset_table,
    coboundary,
    coboundary_space,
    coface_words,
    coset_table,
    cohomology_vanishes,
)
from .complex import Complex
from .errors import BudgetExceeded, InvalidParameter, UndefinedValue
from .gf2 import Basis, GF2Vector, kernel_basis, popcount_rows

BUDGET = 10**8
CHUNK_BITS = 20

Status = Literal["exact", "bounds", "undefined-empty-domain"]


@dataclass
class ExpansionReport:
    k: int
    value: Fraction | None
    status: Status
    witness: Cochain | None = None
    lower: Fraction | None = None
    upper: Fraction | None = None
    cosets_enumerated: int = 0
    quotient_dim: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.status == "exact"


@dataclass
class FillingNormReport:
    k: int
    value: Fraction
    witness: Cochain | None
    fill: Cochain | None
    quotient_dim: int


# -- coset scanning -------------------------------------------------------------


@dataclass
class _ScanResult:
    # leader weight -> (min |d beta| over cosets with that leader weight, first syndrome)
    best: dict[int, tuple[int, int]]
    # over unresolved cosets: min |d beta|, and popcount(syndrome) -> min |d beta|
    unresolved_min: int | None
    unresolved_by_size: dict[int, int]


def _doubling(gens: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros((1 << m, gens.shape[1]), dtype=np.uint64)
    for j in range(m):
        half = 1 << j
        out[half : 2 * half] = out[:half] ^ gens[j]
    return out


def _scan_chunk(table: CosetTable, gens: np.ndarray, low: np.ndarray, m: int, c: int) -> _ScanResult:
    high = np.zeros(gens.shape[1], dtype=np.uint64)
    for j in range(gens.shape[0] - m):
        if (c >> j) & 1:
            high ^= gens[m + j]
    base = c << m
    num = popcount_rows(low ^ high)
    lw = table.leader_weight[base : base + low.shape[0]]
    best: dict[int, tuple[int, int]] = {}
    counts = np.bincount(lw)
    for w in np.flatnonzero(counts):
        w = int(w)
        if w == 0 or w > table.w_cap:
            continue
        idx = np.flatnonzero(lw == w)
        j = int(np.argmin(num[idx]))
        best[w] = (int(num[idx[j]]), base + int(idx[j]))
    unresolved_min = None
    by_size: dict[int, int] = {}
    if counts.size > table.w_cap + 1 and counts[table.w_cap + 1]:
        idx = np.flatnonzero(lw > table.w_cap)
        sub = num[idx]
        unresolved_min = int(sub.min())
        sizes = np.bitwise_count((idx + base).astype(np.uint64))
        for p in np.unique(sizes):
            by_size[int(p)] = int(sub[sizes == p].min())
    return _ScanResult(best, unresolved_min, by_size)


def _merge(acc: _ScanResult, part: _ScanResult) -> _ScanResult:
    for w, (n, s) in part.best.items():
        if w not in acc.best or n < acc.best[w][0]:
            acc.best[w] = (n, s)
    if part.unresolved_min is not None:
        acc.unresolved_min = part.unresolved_min if acc.unresolved_min is None else min(
            acc.unresolved_min, part.unresolved_min)
    for p, n in part.unresolved_by_size.items():
        acc.unresolved_by_size[p] = min(n, acc.unresolved_by_size.get(p, n))
    return acc


def scan_cosets(table: CosetTable, gens: np.ndarray, workers: int = 1,
                chunk_bits: int = CHUNK_BITS) -> _ScanResult:
    """Per leader weight, the smallest coboundary weight over all cosets.

    ``gens[j]`` is the packed image under d of the unit vector on
    ``table.free_columns[j]``.  Chunks are reduced in order, so the result
    does not depend on ``workers``.
    """
    q = table.q
    m = min(q, chunk_bits)
    low = _doubling(gens, m)
    chunks = range(1 << (q - m))
    acc = _ScanResult({}, None, {})
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = pool.map(lambda c: _scan_chunk(table, gens, low, m, c), chunks)
            for part in parts:
                _merge(acc, part)
    else:
        for c in chunks:
            _merge(acc, _scan_chunk(table, gens, low, m, c))
    return acc


# -- coboundary expansion -------------------------------------------------------


def coboundary_expansion(x: Complex, k: int, reduced: bool = True, *, q_max: int = Q_MAX,
                         w_cap: int = W_CAP, budget: int = BUDGET,
                         workers: int = 1) -> ExpansionReport:
    """h^k(X) = min over beta not in B^k of |d beta| / ||[beta]||."""
    if not 0 <= k <= x.top_dim:
        raise InvalidParameter(f"k={k} out of range [0, {x.top_dim}]")
    code = coboundary_space(x, k, reduced)
    q = x.count(k) - code.dim
    if q == 0:
        return ExpansionReport(k, None, "undefined-empty-domain", quotient_dim=0)
    if q > q_max or (1 << q) > budget:
        return _bounds_without_table(x, k, reduced, code, q)

    table = coset_table(x, k, reduced, w_cap, q_max)
    gens = coface_words(x, k, table.free_columns)
    scan = scan_cosets(table, gens, workers)

    best_ratio, best_s = None, None
    for w, (n, s) in scan.best.items():
        r = Fraction(n, w)
        if best_ratio is None or r < best_ratio or (r == best_ratio and s < best_s):
            best_ratio, best_s = r, s
    report = ExpansionReport(k, None, "exact", cosets_enumerated=(1 << q) - 1, quotient_dim=q)
    if best_s is not None:
        report.witness = Cochain(x, k, table.leader(best_s))

    if scan.unresolved_min is None:
        report.value = report.lower = report.upper = best_ratio
        return report

    # some cosets have leader weight > w_cap: bracket their ratios
    upper = Fraction(scan.unresolved_min, w_cap + 1)
    lower = min(Fraction(n, p) for p, n in scan.unresolved_by_size.items())
    if best_ratio is not None:
        upper = min(upper, best_ratio)
        lower = min(lower, best_ratio)
    report.status = "bounds"
    report.lower, report.upper = lower, upper
    report.notes.append(f"leader table truncated at w_cap={w_cap}")
    if lower == upper:
        report.value, report.status = lower, "exact"
    return report


def _bounds_without_table(x: Complex, k: int, reduced: bool, code: Basis, q: int) -> ExpansionReport:
    """Certified bracket when the coset table is over budget.

    Zero is exact whenever H^k != 0.  Otherwise cosets with leader weight 1
    or 2 give exact ratios (upper bound), and every coset has a
    representative of weight <= q with nonzero coboundary (lower bound 1/q).
    """
    report = ExpansionReport(k, None, "bounds", quotient_dim=q)
    if not cohomology_vanishes(x, k, reduced):
        for z in kernel_basis(coboundary(x, k, reduced).matrix).vectors:
            if not code.contains(z):
                report.value = report.lower = report.upper = Fraction(0)
                report.status = "exact"
                report.witness = Cochain(x, k, z)
                report.notes.append("nontrivial cocycle found by rank computation")
                return report
    op = coboundary(x, k, reduced)
    n = x.count(k)
    residues = [code.reduce(1 << i) for i in range(n)]
    weight_one = {r for r in residues if r}
    upper, arg = None, None
    for i in range(n):
        if residues[i]:
            r = Fraction(op.coface_masks[i].bit_count())
            if upper is None or r < upper:
                upper, arg = r, 1 << i
    visited = 0
    pair_cap = 200_000
    for i in range(n):
        if visited > pair_cap:
            break
        for j in range(i + 1, n):
            visited += 1
            s = residues[i] ^ residues[j]
            if s and s not in weight_one:
                r = Fraction((op.coface_masks[i] ^ op.coface_masks[j]).bit_count(), 2)
                if upper is None or r < upper:
                    upper, arg = r, (1 << i) | (1 << j)
    report.upper = upper
    report.lower = Fraction(1, q)
    report.cosets_enumerated = len(weight_one) + visited
    report.witness = Cochain(x, k, GF2Vector(n, arg)) if arg is not None else None
    report.notes.append("coset table over budget; upper bound from weight<=2 leaders")
    return report


# -- edge expansion by vertex subsets ---------------------------------------------


def edge_expansion_sets(g: Complex, max_vertices: int = 24) -> ExpansionReport:
    """min over proper nonempty A of #E(A, A^c) / min(|A|, |A^c|), by enumeration.

    The witness is the indicator of the smallest-mask subset attaining the
    minimum (vertex i is bit i).
    """
    n = g.count(0)
    if n > max_vertices:
        raise BudgetExceeded(f"{n} vertices exceeds the subset-enumeration limit {max_vertices}")
    if n < 2:
        return ExpansionReport(0, None, "undefined-empty-domain")
    nbr = [0] * n
    deg = [0] * n
    for e in g.boundary(1) if g.top_dim >= 1 else ():
        if len(e) != 2:
            continue
        a, b = e
        nbr[a] ^= 1 << b
        nbr[b] ^= 1 << a
        deg[a] += 1
        deg[b] += 1
    cut = np.zeros(1 << n, dtype=np.int32)
    for v in range(n):
        half = 1 << v
        masks = np.arange(half, dtype=np.uint32)
        cut[half : 2 * half] = cut[:half] + deg[v] - 2 * np.bitwise_count(masks & np.uint32(nbr[v]))
    size = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int32)
    denom = np.minimum(size, n - size)
    best, arg = None, None
    for t in range(1, n // 2 + 1):
        idx = np.flatnonzero(denom == t)
        j = int(np.argmin(cut[idx]))
        r = Fraction(int(cut[idx[j]]), t)
        s = int(idx[j])
        if best is None or r < best or (r == best and s < arg):
            best, arg = r, s
    witness = Cochain(g, 0, GF2Vector(n, arg))
    return ExpansionReport(0, best, "exact", witness=witness, lower=best, upper=best,
                           cosets_enumerated=(1 << n) - 2, quotient_dim=n - 1)


# -- filling norm ---------------------------------------------------------------------


def filling_norm(x: Complex, k: int, *, q_max: int = Q_MAX, w_cap: int = W_CAP,
                 budget: int = BUDGET, workers: int = 1) -> FillingNormReport:
    """Smallest c with min{|a| : da = db}/|X^k| <= c |db|/|X^{k+1}| for all b.

    The cheapest filling of db is the leader weight of b modulo the cocycles
    Z^k, so the maximum runs over the cosets of Z^k.
    """
    if not 0 <= k < x.top_dim:
        raise InvalidParameter(f"k={k} must satisfy 0 <= k < top_dim={x.top_dim}")
    cache = x.skeleton_cache(k + 1)
    key = ("Z-coset", k, w_cap)
    table = cache.get(key)
    if table is None:
        z = kernel_basis(coboundary(x, k).matrix)
        q = z.length - z.dim
        if q > q_max or (1 << q) > budget:
            raise BudgetExceeded(f"q={q} exceeds the filling-norm budget", q)
        table = build_coset_table(z, x.count(k), w_cap, q_max)
        cache[key] = table
    if not table.fully_resolved:
        raise BudgetExceeded(f"filling weights exceed w_cap={w_cap}", table.q)
    if table.q == 0:
        return FillingNormReport(k, Fraction(0), None, None, 0)
    gens = coface_words(x, k, table.free_columns)
    scan = scan_cosets(table, gens, workers)
    n_k, n_k1 = x.count(k), x.count(k + 1)
    best, best_s = None, None
    for w, (n, s) in scan.best.items():
        r = Fraction(w * n_k1, n * n_k)
        if best is None or r > best or (r == best and s < best_s):
            best, best_s = r, s
    fill = table.leader(best_s)
    op = coboundary(x, k)
    return FillingNormReport(k, best, Cochain(x, k + 1, op(fill)), Cochain(x, k, fill), table.q)


# -- closed forms and derived statistics ------------------------------------------------

FAMILIES = ("simplex", "cross", "multipartite", "cube")


def predicted_bounds(family: str, n: int, k: int) -> Fraction:
    """Closed-form expansion value (simplex, cube) or lower bound (cross, multipartite)."""
    if family == "simplex":
        return Fraction(n, k + 2)
    if family == "cross":
        return Fraction(2 * (n - k - 1), k + 2)
    if family == "multipartite":
        return Fraction(n, 2 ** (k + 1) - 1)
    if family == "cube":
        return Fraction(1)
    raise InvalidParameter(f"unknown family {family!r}")


def multipartite_recursion(n: int, k: int, c0: Fraction | int) -> Fraction:
    """Run 1/c_i = (1/n)(1 + (2n-2)/c_{i-1}) from a given base value c_0."""
    c = Fraction(c0)
    for _ in range(k):
        c = Fraction(n) * c / (c + 2 * n - 2)
    return c


def face_relative_ratio(x: Complex, k: int, h_value) -> float:
    """log |X^(k)| / h^k."""
    if h_value is None or h_value <= 0:
        raise UndefinedValue("face-relative ratio needs h > 0")
    return math.log(x.count(k)) / float(h_value)


def degree_relative_ratio(x: Complex, k: int, h_value) -> Fraction:
    """h^k / D_k."""
    from .complex import degree_profile

    return Fraction(h_value) / degree_profile(x, k).max_degree
