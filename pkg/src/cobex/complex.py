"""Finite cell complexes with mod-2 incidence, and the standard families.

Cells of each dimension are addressed by dense 0-based indices.  Labels are
only for display and I/O:

* simplicial: sorted tuple of 1-based vertex ids
* cube: string over ``{0, 1, *}``
* cross: tuple of signed coordinates ``+i`` / ``-i`` sorted by ``|i|``
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Hashable, Iterable, Sequence

from .errors import InvalidParameter, UnsupportedOperation, WouldBreakClosure

SIMPLICIAL = "simplicial"
CUBE = "cube"
CROSS = "cross"
KINDS = (SIMPLICIAL, CUBE, CROSS)


@dataclass(frozen=True)
class CellId:
    dimension: int
    index: int


@dataclass(frozen=True)
class DegreeProfile:
    k: int
    max_degree: int
    min_degree: int
    mean_degree: Fraction


class Complex:
    """Immutable cell complex.

    ``boundary[d][i]`` is the sorted tuple of (d-1)-cell indices that occur an
    odd number of times in the boundary of d-cell ``i``; ``boundary[0]`` holds
    empty tuples.
    """

    def __init__(
        self,
        labels: Sequence[Sequence[Hashable]],
        boundary: Sequence[Sequence[Sequence[int]]],
        kind: str = SIMPLICIAL,
        *,
        validate: bool = True,
        _shared: list | None = None,
    ):
        if kind not in KINDS:
            raise InvalidParameter(f"unknown label kind {kind!r}")
        if len(labels) == 0:
            raise InvalidParameter("a complex needs at least dimension 0")
        self.kind = kind
        self._labels = tuple(tuple(ls) for ls in labels)
        bd = [tuple(() for _ in self._labels[0])]
        bd += [tuple(tuple(b) for b in boundary[d]) for d in range(1, len(self._labels))]
        self._boundary = tuple(bd)
        # per-dimension caches; index d holds data depending only on the
        # d-skeleton, so subcomplexes that keep that skeleton may share it
        self._shared = _shared if _shared is not None else [dict() for _ in self._labels]
        self._index: list[dict | None] = [None] * len(self._labels)
        self._cofaces: list[tuple | None] = [None] * len(self._labels)
        if validate:
            self.validate()

    # -- basic queries -------------------------------------------------------

    @property
    def top_dim(self) -> int:
        return len(self._labels) - 1

    @property
    def cells_per_dim(self) -> tuple[int, ...]:
        return tuple(len(ls) for ls in self._labels)

    def count(self, d: int) -> int:
        if d < 0 or d > self.top_dim:
            return 0
        return len(self._labels[d])

    def labels(self, d: int) -> tuple:
        return self._labels[d]

    def label(self, cell: CellId) -> Hashable:
        return self._labels[cell.dimension][cell.index]

    def boundary(self, d: int) -> tuple[tuple[int, ...], ...]:
        return self._boundary[d]

    def index_of(self, d: int, label: Hashable) -> int:
        if self._index[d] is None:
            self._index[d] = {lab: i for i, lab in enumerate(self._labels[d])}
        return self._index[d][_normalize_label(self.kind, label)]

    def cofaces(self, d: int) -> tuple[tuple[int, ...], ...]:
        """For each d-cell, the sorted (d+1)-cells having it in their boundary."""
        if self._cofaces[d] is None:
            acc: list[list[int]] = [[] for _ in range(self.count(d))]
            if d < self.top_dim:
                for j, faces in enumerate(self._boundary[d + 1]):
                    for i in faces:
                        acc[i].append(j)
            self._cofaces[d] = tuple(tuple(c) for c in acc)
        return self._cofaces[d]

    def skeleton_cache(self, d: int) -> dict:
        return self._shared[d]

    def skeleton(self, d: int) -> Complex:
        if not 0 <= d <= self.top_dim:
            raise InvalidParameter(f"skeleton dimension {d} out of range")
        return Complex(
            self._labels[: d + 1], self._boundary[: d + 1], self.kind,
            validate=False, _shared=self._shared[: d + 1],
        )

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        for d, labs in enumerate(self._labels):
            if len(set(labs)) != len(labs):
                raise InvalidParameter(f"duplicate labels in dimension {d}")
        for d in range(1, self.top_dim + 1):
            below = self.count(d - 1)
            for i, faces in enumerate(self._boundary[d]):
                if any(b <= a for a, b in zip(faces, faces[1:])):
                    raise InvalidParameter(f"boundary of cell ({d},{i}) not sorted/unique")
                if faces and (faces[0] < 0 or faces[-1] >= below):
                    raise InvalidParameter(f"boundary of cell ({d},{i}) out of range")
            if len(self._boundary[d]) != self.count(d):
                raise InvalidParameter(f"boundary list length mismatch in dimension {d}")
        for d in range(2, self.top_dim + 1):
            for i in range(self.count(d)):
                if self.boundary_of_boundary(d, i):
                    raise InvalidParameter(f"boundary of boundary of ({d},{i}) is nonzero")

    def boundary_of_boundary(self, d: int, i: int) -> set[int]:
        acc: set[int] = set()
        for f in self._boundary[d][i]:
            acc ^= set(self._boundary[d - 1][f])
        return acc

    # -- comparison / serialization -----------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return (
            self.kind == other.kind
            and self._labels == other._labels
            and self._boundary == other._boundary
        )

    def __hash__(self):
        return hash((self.kind, self.cells_per_dim))

    def __repr__(self) -> str:
        return f"Complex(kind={self.kind}, cells={self.cells_per_dim})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "top_dim": self.top_dim,
            "cells": [[_label_to_json(lab) for lab in labs] for labs in self._labels],
            "boundary": [[list(b) for b in self._boundary[d]] for d in range(1, self.top_dim + 1)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> Complex:
        if "maximal_faces" in obj:
            return from_maximal_faces(obj["maximal_faces"])
        cells = obj["cells"]
        kind = obj.get("kind") or _infer_kind(cells)
        labels = [[_normalize_label(kind, lab) for lab in labs] for labs in cells]
        top = obj.get("top_dim", len(labels) - 1)
        if top != len(labels) - 1:
            raise InvalidParameter("top_dim does not match the cell lists")
        boundary = [()] + [[tuple(b) for b in bd] for bd in obj.get("boundary", [])]
        if len(boundary) != len(labels):
            raise InvalidParameter("need one boundary list per dimension >= 1")
        return cls(labels, boundary, kind)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)


def load(path) -> Complex:
    with open(path) as fh:
        return Complex.from_json(json.load(fh))


def _label_to_json(lab):
    return lab if isinstance(lab, str) else list(lab)


def _normalize_label(kind: str, lab):
    if kind == CUBE:
        return str(lab)
    if kind == CROSS:
        return tuple(sorted((int(v) for v in lab), key=abs))
    return tuple(sorted(int(v) for v in lab))


def _infer_kind(cells) -> str:
    flat = [lab for labs in cells for lab in labs]
    if flat and isinstance(flat[0], str):
        return CUBE
    if any(v < 0 for lab in flat for v in lab):
        return CROSS
    return SIMPLICIAL


# -- constructors ---------------------------------------------------------------


def _from_face_lists(cells_by_dim: list[list[tuple]], kind: str, key=None) -> Complex:
    """Build a simplicial-type complex; the boundary of a cell drops one entry."""
    index = [{c: i for i, c in enumerate(cells)} for cells in cells_by_dim]
    boundary: list[list[tuple[int, ...]]] = [[]]
    for d in range(1, len(cells_by_dim)):
        rows = []
        for c in cells_by_dim[d]:
            faces = sorted(index[d - 1][c[:i] + c[i + 1 :]] for i in range(len(c)))
            rows.append(tuple(faces))
        boundary.append(rows)
    return Complex(cells_by_dim, boundary, kind, validate=False)


def build_simplex_skeleton(n: int, d: int) -> Complex:
    """The d-skeleton of the simplex on vertices 1..n."""
    if n < 1 or not 0 <= d <= n - 1:
        raise InvalidParameter(f"need 0 <= d <= n-1, got n={n}, d={d}")
    cells = [list(combinations(range(1, n + 1), j + 1)) for j in range(d + 1)]
    return _from_face_lists(cells, SIMPLICIAL)


def build_cube(n: int) -> Complex:
    if n < 1:
        raise InvalidParameter("cube dimension must be >= 1")
    cells: list[list[str]] = []
    for j in range(n + 1):
        layer = []
        for stars in combinations(range(n), j):
            fixed = [i for i in range(n) if i not in stars]
            for bits in product("01", repeat=n - j):
                lab = ["*"] * n
                for i, b in zip(fixed, bits):
                    lab[i] = b
                layer.append("".join(lab))
        cells.append(sorted(layer))
    index = [{c: i for i, c in enumerate(layer)} for layer in cells]
    boundary: list[list[tuple[int, ...]]] = [[]]
    for j in range(1, n + 1):
        rows = []
        for lab in cells[j]:
            faces = []
            for i, ch in enumerate(lab):
                if ch == "*":
                    faces.append(index[j - 1][lab[:i] + "0" + lab[i + 1 :]])
                    faces.append(index[j - 1][lab[:i] + "1" + lab[i + 1 :]])
            rows.append(tuple(sorted(faces)))
        boundary.append(rows)
    return Complex(cells, boundary, CUBE, validate=False)


def build_cross_polytope(n: int) -> Complex:
    """Boundary complex of the n-dimensional cross-polytope (top dim n-1)."""
    if n < 1:
        raise InvalidParameter("cross-polytope dimension must be >= 1")
    cells = []
    for k in range(n):
        layer = []
        for coords in combinations(range(1, n + 1), k + 1):
            for signs in product((1, -1), repeat=k + 1):
                layer.append(tuple(s * c for s, c in zip(signs, coords)))
        cells.append(layer)
    return _from_face_lists(cells, CROSS)


def points(n: int) -> Complex:
    """n isolated vertices, labelled 1..n."""
    return build_simplex_skeleton(n, 0)


def build_multipartite(n: int, k: int) -> Complex:
    """Join of k+2 discrete sets of n vertices; part ``p`` uses ids p*n+1..p*n+n."""
    if n < 1 or k < 0:
        raise InvalidParameter(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    parts = [range(p * n + 1, p * n + n + 1) for p in range(k + 2)]
    cells = []
    for d in range(k + 2):
        layer = []
        for chosen in combinations(range(k + 2), d + 1):
            layer.extend(product(*(parts[p] for p in chosen)))
        cells.append(sorted(layer))
    return _from_face_lists(cells, SIMPLICIAL)


def join(x: Complex, y: Complex) -> Complex:
    """Simplicial join; y's vertex ids are shifted past x's largest id."""
    if x.kind != SIMPLICIAL or y.kind != SIMPLICIAL:
        raise UnsupportedOperation("join is only defined here for simplicial complexes")
    shift = max(v for (v,) in x.labels(0)) if x.count(0) else 0
    xs = [lab for d in range(x.top_dim + 1) for lab in x.labels(d)]
    ys = [tuple(v + shift for v in lab) for d in range(y.top_dim + 1) for lab in y.labels(d)]
    simplices = xs + ys + [a + b for a in xs for b in ys]
    top = x.top_dim + y.top_dim + 1
    cells: list[list[tuple]] = [[] for _ in range(top + 1)]
    for s in simplices:
        cells[len(s) - 1].append(tuple(sorted(s)))
    return _from_face_lists([sorted(c) for c in cells], SIMPLICIAL)


def from_maximal_faces(faces: Iterable[Iterable[int]]) -> Complex:
    """Downward closure of a list of vertex sets."""
    closure: set[tuple[int, ...]] = set()
    for f in faces:
        f = tuple(sorted(set(int(v) for v in f)))
        if not f:
            continue
        for r in range(1, len(f) + 1):
            closure.update(combinations(f, r))
    if not closure:
        raise InvalidParameter("no faces given")
    top = max(len(s) for s in closure) - 1
    cells = [sorted(s for s in closure if len(s) == d + 1) for d in range(top + 1)]
    return _from_face_lists(cells, SIMPLICIAL)


def degree_profile(x: Complex, k: int) -> DegreeProfile:
    if not 0 <= k < x.top_dim:
        raise InvalidParameter(f"k={k} must satisfy 0 <= k < top_dim={x.top_dim}")
    degs = [len(c) for c in x.cofaces(k)]
    if not degs:
        return DegreeProfile(k, 0, 0, Fraction(0))
    return DegreeProfile(k, max(degs), min(degs), Fraction(sum(degs), len(degs)))


def delete_cells(x: Complex, dim: int, drop: Iterable[int]) -> Complex:
    """Remove top-dimensional cells; lower skeleton (and its caches) is shared."""
    if dim != x.top_dim:
        raise WouldBreakClosure(f"only top cells (dim {x.top_dim}) can be deleted, not dim {dim}")
    drop = set(drop)
    if drop and (min(drop) < 0 or max(drop) >= x.count(dim)):
        raise InvalidParameter("cell index out of range")
    keep = [i for i in range(x.count(dim)) if i not in drop]
    return keep_top_cells(x, keep)


def keep_top_cells(x: Complex, keep: Sequence[int]) -> Complex:
    d = x.top_dim
    labels = list(x._labels[:d]) + [tuple(x._labels[d][i] for i in keep)]
    boundary = list(x._boundary[:d]) + [tuple(x._boundary[d][i] for i in keep)]
    shared = x._shared[:d] + [dict()]
    return Complex(labels, boundary, x.kind, validate=False, _shared=shared)
