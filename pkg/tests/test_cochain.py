import random

import pytest

from cobex.cochain import (
    Cochain,
    build_coset_table,
    coboundary,
    coboundary_space,
    cocycle_space,
    cohomology_dim,
    cohomology_vanishes,
    coset_table,
    d,
    naive_coset_weights,
    quotient_norm,
    quotient_norm_exhaustive,
)
from cobex.complex import (
    build_cross_polytope,
    build_cube,
    build_simplex_skeleton,
    delete_cells,
    from_maximal_faces,
)
from cobex.errors import BudgetExceeded, InvalidParameter
from cobex.gf2 import Basis, GF2Vector, rank

from conftest import dense_rank, random_complex, random_graph


def test_coboundary_examples():
    k3 = build_simplex_skeleton(3, 1)
    beta = Cochain.from_labels(k3, 0, [(1,)])
    assert d(k3, beta).support_labels() == [(1, 2), (1, 3)]
    dm1 = coboundary(k3, -1)
    assert dm1(GF2Vector(1, 1)).weight() == 3
    with pytest.raises(InvalidParameter):
        coboundary(k3, -1, reduced=False)
    with pytest.raises(InvalidParameter):
        coboundary(k3, 2)
    # the top dimension maps into the zero space
    assert coboundary(k3, 1).matrix.shape == (0, 3)


def test_unreduced_rank_of_k4():
    k4 = build_simplex_skeleton(4, 1)
    assert rank(coboundary(k4, 0, reduced=False).matrix) == 3
    k3 = build_simplex_skeleton(3, 1)
    assert coboundary_space(k3, 1, reduced=False).dim == 2
    assert cocycle_space(build_simplex_skeleton(4, 2), 1).dim == 3


@pytest.mark.parametrize("make", [
    lambda: build_simplex_skeleton(5, 2),
    lambda: build_cube(3),
    lambda: build_cross_polytope(3),
])
def test_dd_is_zero(make):
    x = make()
    for k in range(-1, x.top_dim - 1):
        a = coboundary(x, k).matrix.to_dense().astype(int)
        b = coboundary(x, k + 1).matrix.to_dense().astype(int)
        assert not ((b @ a) % 2).any()


def test_cohomology_examples():
    for n in range(2, 7):
        x = build_simplex_skeleton(n, n - 1)
        assert all(cohomology_dim(x, k) == 0 for k in range(n - 1))
    circle = build_simplex_skeleton(3, 1)
    assert cohomology_dim(circle, 1) == 1
    assert cohomology_dim(build_cube(3), 2) == 0
    # the octahedron is a 2-sphere
    assert cohomology_dim(build_cross_polytope(3), 2) == 1
    assert cohomology_dim(build_cross_polytope(3), 1) == 0
    three_parts = from_maximal_faces([(1, 2), (2, 3), (4, 5), (6,)])
    assert cohomology_dim(three_parts, 0) == 2
    assert cohomology_dim(three_parts, 0, reduced=False) == 3


def test_cohomology_matches_rank_oracle():
    rng = random.Random(2)
    for _ in range(30):
        x = random_complex(rng, 6, 2, 0.35)
        for k in range(x.top_dim + 1):
            dk = coboundary(x, k).matrix.to_dense()
            dprev = coboundary(x, k - 1).matrix.to_dense()
            want = x.count(k) - dense_rank(dk) - dense_rank(dprev)
            assert cohomology_dim(x, k) == want
            assert cohomology_vanishes(x, k) == (want == 0)


def test_coset_table_matches_weight_ordered_walk():
    rng = random.Random(4)
    for _ in range(40):
        length = rng.randint(1, 12)
        gens = [rng.getrandbits(length) for _ in range(rng.randint(0, length))]
        code = Basis.span(length, gens)
        table = build_coset_table(code, length)
        naive = naive_coset_weights(code)
        assert table.fully_resolved
        assert {s: int(table.leader_weight[s]) for s in range(1 << table.q)} == naive
        for s in range(1 << table.q):
            leader = table.leader(s)
            assert leader.weight() == naive[s]
            assert table.syndrome(leader) == s
            assert table.syndrome(table.representative(s)) == s


def test_coset_table_truncation():
    code = Basis.span(10, [])
    table = build_coset_table(code, 10, w_cap=3)
    assert not table.fully_resolved
    assert not table.is_resolved((1 << 10) - 1)
    assert int(table.leader_weight[0b111]) == 3
    with pytest.raises(BudgetExceeded) as err:
        build_coset_table(Basis.span(40, []), 40, q_max=28)
    assert err.value.q == 40


def test_quotient_norm_examples():
    k4 = build_simplex_skeleton(4, 1)
    path = Cochain.from_labels(k4, 1, [(1, 2), (2, 3), (3, 4)])
    assert quotient_norm(k4, 1, path) == 1
    assert quotient_norm(k4, 0, Cochain.from_labels(k4, 0, [(1,)])) == 1
    star = d(k4, Cochain.from_labels(k4, 0, [(2,)]))
    assert quotient_norm(k4, 1, star) == 0


def test_quotient_norm_against_exhaustive():
    rng = random.Random(9)
    checked = 0
    while checked < 60:
        x = random_complex(rng, rng.randint(3, 6), 2, 0.4)
        k = rng.randint(0, x.top_dim)
        if x.count(k) > 12 or (k > 0 and x.count(k - 1) > 14):
            continue
        for _ in range(5):
            beta = GF2Vector(x.count(k), rng.getrandbits(x.count(k)))
            assert quotient_norm(x, k, beta) == quotient_norm_exhaustive(x, k, beta)
        checked += 1


def test_deletion_observation():
    """Deleting a few top cells from a full skeleton: h = 0 exactly when H^1 appears."""
    from cobex.expansion import coboundary_expansion

    for n in (4, 5):
        base = build_simplex_skeleton(n, 2)
        for size in range(0, 5):
            for trial in range(6):
                rng = random.Random(100 * n + 10 * size + trial)
                drop = rng.sample(range(base.count(2)), min(size, base.count(2)))
                y = delete_cells(base, 2, drop)
                rep = coboundary_expansion(y, 1)
                assert rep.exact
                assert (rep.value == 0) == (cohomology_dim(y, 1) > 0)


def test_quotient_norm_code_path():
    # large quotient, tiny code: the code-enumeration branch is used
    g, _ = random_graph(random.Random(3), 12, 0.9)
    beta = GF2Vector(g.count(1), (1 << g.count(1)) - 1)
    assert quotient_norm(g, 1, beta, q_max=4) == quotient_norm_exhaustive(g, 1, beta)


def test_coset_table_cached_on_complex():
    x = build_simplex_skeleton(5, 2)
    assert coset_table(x, 1) is coset_table(x, 1)
