"""Filling cycles in the n-cube and the cross-polytope/cube duality.

Chains on Q_n are handled as sets of cell labels (strings over ``{0,1,*}``);
they are converted to and from the cube's global cell indexing at the API
boundary.  The filling recursion picks a facet H+ (coordinate i fixed to a
bit), cones the part of z in H+ across coordinate i, and fills the
remaining cycle inside the opposite facet.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from .cochain import coboundary, leader_weight_by_code
from .complex import Complex, build_cross_polytope, build_cube
from .errors import InvalidParameter, NotACycle, UnsupportedOperation
from .gf2 import GF2Vector, kernel_basis, solve

Strategy = Literal["exhaustive", "greedy"]
EXHAUSTIVE_MAX_N = 6


@dataclass
class ChainFill:
    n: int
    j: int
    z: GF2Vector
    y: GF2Vector
    achieved_ratio: Fraction | None
    bound: Fraction
    strategy: str

    @property
    def within_bound(self) -> bool:
        return self.achieved_ratio is None or self.achieved_ratio <= self.bound


def fill_bound(n: int, j: int) -> Fraction:
    return Fraction(n - j, 2 * (j + 1))


@lru_cache(maxsize=16)
def _cube(n: int) -> Complex:
    return build_cube(n)


@lru_cache(maxsize=16)
def _cross(n: int) -> Complex:
    return build_cross_polytope(n)


def chain_boundary(chain: frozenset[str]) -> frozenset[str]:
    """Mod-2 boundary of a set of cube cells."""
    out: set[str] = set()
    for lab in chain:
        for i, ch in enumerate(lab):
            if ch == "*":
                out ^= {lab[:i] + "0" + lab[i + 1 :], lab[:i] + "1" + lab[i + 1 :]}
    return frozenset(out)


def _set(lab: str, i: int, ch: str) -> str:
    return lab[:i] + ch + lab[i + 1 :]


def _fill_labels(z: frozenset[str], free: tuple[int, ...], j: int, exhaustive: bool,
                 memo: dict) -> frozenset[str]:
    """A (j+1)-chain with boundary z inside the subcube whose free coordinates are ``free``."""
    if not z:
        return frozenset()
    key = (z, free)
    if key in memo:
        return memo[key]
    if len(free) == j + 1:
        # the only nonzero j-cycle of Q_{j+1} is the boundary of the cube itself
        lab = next(iter(z))
        top = "".join("*" if i in free else ch for i, ch in enumerate(lab))
        result = frozenset([top])
        memo[key] = result
        return result

    def facet_fill(i: int, bit: str) -> frozenset[str]:
        other = "1" if bit == "0" else "0"
        plus = [lab for lab in z if lab[i] == bit]
        minus = {lab for lab in z if lab[i] == other}
        moved = {_set(lab, i, other) for lab in plus}
        rest = frozenset(moved ^ minus)
        y_minus = _fill_labels(rest, tuple(c for c in free if c != i), j, exhaustive, memo)
        y_plus = frozenset(_set(lab, i, "*") for lab in plus)
        return y_plus | y_minus

    if exhaustive:
        best = None
        for i in free:
            for bit in "01":
                y = facet_fill(i, bit)
                if best is None or len(y) < len(best):
                    best = y
    else:
        i, bit = max(
            ((i, b) for i in free for b in "01"),
            key=lambda ib: (sum(1 for lab in z if lab[ib[0]] == ib[1]), -ib[0], ib[1] == "0"),
        )
        best = facet_fill(i, bit)
    memo[key] = best
    return best


def _is_cycle(z: frozenset[str], j: int) -> bool:
    if j == 0:
        return len(z) % 2 == 0
    return not chain_boundary(z)


def cube_fill(n: int, j: int, z: GF2Vector, strategy: Strategy = "exhaustive") -> ChainFill:
    """A (j+1)-chain y in Q_n with boundary z.

    The exhaustive strategy keeps the smallest result over all 2n facet
    choices at every level, which guarantees vol(y) <= (n-j)/(2(j+1)) vol(z).
    Greedy uses the facet meeting z the most and only reports whether the
    bound held.
    """
    if n < 1 or not 0 <= j < n:
        raise InvalidParameter(f"need 0 <= j < n, got n={n}, j={j}")
    if strategy not in ("exhaustive", "greedy"):
        raise InvalidParameter(f"unknown strategy {strategy!r}")
    if strategy == "exhaustive" and n > EXHAUSTIVE_MAX_N:
        raise InvalidParameter(f"exhaustive filling is capped at n <= {EXHAUSTIVE_MAX_N}")
    cube = _cube(n)
    if z.length != cube.count(j):
        raise InvalidParameter("chain length does not match the cube's j-cells")
    labels = cube.labels(j)
    zl = frozenset(labels[i] for i in z.support())
    if not _is_cycle(zl, j):
        raise NotACycle("input chain has nonzero boundary")
    yl = _fill_labels(zl, tuple(range(n)), j, strategy == "exhaustive", {})
    if chain_boundary(yl) != zl:  # pragma: no cover - construction invariant
        raise RuntimeError("filling does not bound the input cycle")
    y = GF2Vector.from_support(cube.count(j + 1), (cube.index_of(j + 1, lab) for lab in yl))
    ratio = Fraction(len(yl), len(zl)) if zl else None
    return ChainFill(n, j, z, y, ratio, fill_bound(n, j), strategy)


def cube_boundary(n: int, j: int, chain: GF2Vector) -> GF2Vector:
    """Boundary map C_{j} Q_n -> C_{j-1} Q_n on index vectors (j >= 1)."""
    cube = _cube(n)
    out = 0
    for i in chain.support():
        for f in cube.boundary(j)[i]:
            out ^= 1 << f
    return GF2Vector(cube.count(j - 1), out)


def min_fill_oracle(n: int, j: int, z: GF2Vector, code_max: int = 22) -> int:
    """Exact minimum volume of a (j+1)-chain bounding z.

    A particular solution of the boundary equation plus every (j+1)-cycle;
    the minimum is a coset-leader weight modulo the cycle space.
    """
    cube = _cube(n)
    if not z:
        return 0
    # boundary C_{j+1} -> C_j is the transpose of d_j
    bd = coboundary(cube, j).matrix.transpose()
    y0 = solve(bd, z)
    if y0 is None:
        raise NotACycle("z is not a boundary in the cube")
    cycles = kernel_basis(bd)
    if cycles.dim > code_max:
        from .errors import BudgetExceeded

        raise BudgetExceeded(f"cycle space of dimension {cycles.dim} too large to scan")
    return leader_weight_by_code(cycles, y0)


def random_cycle(n: int, j: int, rng) -> GF2Vector:
    """Boundary of a uniformly random (j+1)-chain; Q_n is contractible."""
    cube = _cube(n)
    m = cube.count(j + 1)
    w = GF2Vector.from_support(m, [i for i in range(m) if rng.random() < 0.5])
    return cube_boundary(n, j + 1, w)


# -- duality -------------------------------------------------------------------------


def _dual_label(cell: tuple[int, ...], n: int) -> str:
    lab = ["*"] * n
    for c in cell:
        lab[abs(c) - 1] = "1" if c > 0 else "0"
    return "".join(lab)


@lru_cache(maxsize=64)
def dual_index_map(n: int, k: int) -> tuple[int, ...]:
    """Position of the image of each k-cell of the cross-polytope among Q_n's (n-k-1)-cells."""
    if not 0 <= k <= n - 1:
        raise InvalidParameter(f"k={k} out of range for the {n}-cross-polytope")
    cross, cube = _cross(n), _cube(n)
    return tuple(cube.index_of(n - k - 1, _dual_label(c, n)) for c in cross.labels(k))


def cross_dual(n: int, k: int, beta: GF2Vector) -> GF2Vector:
    """Identify a k-cochain on the cross-polytope with an (n-k-1)-chain on Q_n."""
    idx = dual_index_map(n, k)
    if beta.length != len(idx):
        raise InvalidParameter("cochain length does not match the cross-polytope's k-cells")
    return GF2Vector.from_support(len(idx), (idx[i] for i in beta.support()))


def cross_dual_inverse(n: int, k: int, chain: GF2Vector) -> GF2Vector:
    idx = dual_index_map(n, k)
    inv = [0] * len(idx)
    for i, c in enumerate(idx):
        inv[c] = i
    if chain.length != len(idx):
        raise InvalidParameter("chain length does not match")
    return GF2Vector.from_support(len(idx), (inv[c] for c in chain.support()))


def duality_commutes(n: int, k: int, beta: GF2Vector) -> bool:
    """Check iota(d beta) == boundary(iota beta) for one cochain."""
    if k >= n - 1:
        raise UnsupportedOperation("no (k+1)-cells above the top dimension")
    cross = _cross(n)
    lhs = cross_dual(n, k + 1, coboundary(cross, k)(beta))
    rhs = cube_boundary(n, n - k - 1, cross_dual(n, k, beta))
    return lhs == rhs


def cross_filling_certificate(n: int, k: int, beta: GF2Vector) -> tuple[GF2Vector, Fraction]:
    """Push a cross-polytope cochain through the duality and fill in the cube.

    Returns beta' = iota^{-1}(y), which has d beta' = d beta, together with
    the bound (k+2)/(2(n-k-1)) |d beta| that |beta'| must respect.
    """
    j = n - k - 2
    if j < 0:
        raise InvalidParameter("needs k <= n-2")
    cross = _cross(n)
    db = coboundary(cross, k)(beta)
    z = cross_dual(n, k + 1, db)
    fill = cube_fill(n, j, z, "exhaustive" if n <= EXHAUSTIVE_MAX_N else "greedy")
    beta2 = cross_dual_inverse(n, k, fill.y)
    return beta2, Fraction(k + 2, 2 * (n - k - 1)) * db.weight()
