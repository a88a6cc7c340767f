import math
import random
from fractions import Fraction

import pytest

from cobex.cochain import coboundary, cohomology_dim, quotient_norm_exhaustive
from cobex.complex import (
    build_cross_polytope,
    build_cube,
    build_multipartite,
    build_simplex_skeleton,
    delete_cells,
)
from cobex.errors import InvalidParameter, UndefinedValue
from cobex.expansion import (
    coboundary_expansion,
    degree_relative_ratio,
    edge_expansion_sets,
    face_relative_ratio,
    filling_norm,
    multipartite_recursion,
    predicted_bounds,
)
from cobex.gf2 import GF2Vector

from conftest import random_complex, random_graph, subset_edge_expansion


def brute_expansion(x, k):
    """min |d beta| / ||[beta]|| over every cochain outside B^k."""
    op = coboundary(x, k)
    best = None
    for bits in range(1, 1 << x.count(k)):
        beta = GF2Vector(x.count(k), bits)
        w = quotient_norm_exhaustive(x, k, beta)
        if w == 0:
            continue
        r = Fraction(op(beta).weight(), w)
        if best is None or r < best:
            best = r
    return best


def brute_filling_norm(x, k):
    """max over d beta != 0 of (cheapest filling / |X^k|) / (|d beta| / |X^(k+1)|)."""
    op = coboundary(x, k)
    cheapest: dict[int, int] = {}
    for bits in range(1 << x.count(k)):
        img = op(GF2Vector(x.count(k), bits)).bits
        w = bits.bit_count()
        if img not in cheapest or w < cheapest[img]:
            cheapest[img] = w
    best = Fraction(0)
    for img, w in cheapest.items():
        if img:
            best = max(best, Fraction(w * x.count(k + 1), img.bit_count() * x.count(k)))
    return best


@pytest.mark.parametrize("n,want", [(3, 2), (4, 2), (5, 3), (6, 3), (7, 4), (8, 4)])
def test_simplex_vertices(n, want):
    rep = coboundary_expansion(build_simplex_skeleton(n, 1), 0)
    assert rep.exact and rep.value == want


def test_spec_examples():
    assert coboundary_expansion(build_simplex_skeleton(4, 1), 0).value == 2
    assert coboundary_expansion(build_simplex_skeleton(4, 2), 1).value == 2
    square = build_cross_polytope(2)
    assert coboundary_expansion(square, 0).value == 1
    two = delete_cells(build_simplex_skeleton(4, 2), 2, [0, 1])
    rep = coboundary_expansion(two, 1)
    assert rep.value == 0 and rep.exact
    assert coboundary(two, 1)(rep.witness.vec).weight() == 0


def test_k33_witness():
    g = build_multipartite(3, 0)
    rep = coboundary_expansion(g, 0)
    assert rep.value == Fraction(5, 3)
    sets = edge_expansion_sets(g)
    assert sets.value == Fraction(5, 3)
    assert sets.witness.support_labels() == [(1,), (2,), (4,)]


def test_witness_attains_value():
    for x, k in [(build_simplex_skeleton(6, 2), 1), (build_cross_polytope(3), 1),
                 (build_cube(3), 1), (build_multipartite(2, 1), 1)]:
        rep = coboundary_expansion(x, k)
        w = rep.witness
        ratio = Fraction(coboundary(x, k)(w.vec).weight(), quotient_norm_exhaustive(x, k, w.vec))
        assert ratio == rep.value


def test_against_brute_force_on_random_complexes():
    rng = random.Random(21)
    done = 0
    while done < 40:
        x = random_complex(rng, rng.randint(3, 6), 2, 0.45)
        k = rng.randint(0, x.top_dim)
        if x.count(k) > 11 or (k > 0 and x.count(k - 1) > 12):
            continue
        rep = coboundary_expansion(x, k)
        want = brute_expansion(x, k)
        if want is None:
            assert rep.status == "undefined-empty-domain"
        else:
            assert rep.exact and rep.value == want
            done += 1


def test_graph_expansion_matches_subsets():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(2, 9)
        g, edges = random_graph(rng, n, rng.uniform(0.2, 0.9))
        want = subset_edge_expansion(n, [(a - 1, b - 1) for a, b in edges])
        if g.top_dim == 0:
            continue
        assert coboundary_expansion(g, 0).value == want
        assert edge_expansion_sets(g).value == want


def test_unreduced_k0_is_zero():
    # without augmentation the constant vertex cochain is a nontrivial cocycle
    assert coboundary_expansion(build_simplex_skeleton(4, 1), 0, reduced=False).value == 0


def test_empty_domain():
    tri = build_simplex_skeleton(3, 2)
    assert coboundary_expansion(tri, 2).status == "undefined-empty-domain"
    with pytest.raises(InvalidParameter):
        coboundary_expansion(tri, 3)


def test_workers_do_not_change_results():
    x = build_simplex_skeleton(7, 2)
    a = coboundary_expansion(x, 1, workers=1)
    b = coboundary_expansion(x, 1, workers=3)
    assert (a.value, a.witness) == (b.value, b.witness)


def test_bounds_mode_brackets_the_value():
    x = build_simplex_skeleton(7, 2)
    exact = coboundary_expansion(x, 1).value
    rep = coboundary_expansion(x, 1, q_max=5)
    assert rep.status == "bounds"
    assert rep.lower <= exact <= rep.upper
    # cohomology is detected exactly even over budget
    two = delete_cells(build_simplex_skeleton(6, 2), 2, range(10))
    assert cohomology_dim(two, 1) > 0
    rep = coboundary_expansion(two, 1, q_max=3)
    assert rep.exact and rep.value == 0


def test_w_cap_truncation_still_brackets():
    x = build_simplex_skeleton(7, 2)
    exact = coboundary_expansion(x, 1).value
    rep = coboundary_expansion(x, 1, w_cap=2)
    assert rep.lower <= exact <= rep.upper


def test_filling_norm_against_brute_force():
    rng = random.Random(8)
    done = 0
    while done < 25:
        x = random_complex(rng, rng.randint(3, 5), 2, 0.5)
        k = rng.randint(0, x.top_dim - 1) if x.top_dim else None
        if k is None or x.count(k) > 12:
            continue
        assert filling_norm(x, k).value == brute_filling_norm(x, k)
        done += 1


def test_filling_norm_identity_on_k4():
    k4 = build_simplex_skeleton(4, 1)
    f = filling_norm(k4, 0)
    assert f.value == Fraction(3, 4)
    h = coboundary_expansion(k4, 0).value
    assert f.value * h * 4 == 6


def test_filling_norm_finite_with_cohomology():
    x = delete_cells(build_simplex_skeleton(4, 2), 2, [0, 1])
    assert cohomology_dim(x, 1) == 1
    assert coboundary_expansion(x, 1).value == 0
    assert 0 < filling_norm(x, 1).value < math.inf


def test_predicted_bounds():
    assert predicted_bounds("simplex", 6, 1) == 2
    assert predicted_bounds("cross", 3, 0) == 2
    assert predicted_bounds("cube", 5, 2) == 1
    assert predicted_bounds("multipartite", 3, 1) == 1
    with pytest.raises(InvalidParameter):
        predicted_bounds("torus", 3, 1)


def test_multipartite_recursion():
    assert multipartite_recursion(3, 0, 3) == 3
    assert multipartite_recursion(3, 1, 3) == Fraction(9, 7)
    assert multipartite_recursion(3, 1, Fraction(5, 3)) == Fraction(15, 17)


def test_face_relative_and_degree_ratios():
    x = build_simplex_skeleton(9, 2)
    assert face_relative_ratio(x, 1, 3) == pytest.approx(math.log(36) / 3)
    assert degree_relative_ratio(x, 1, 3) == Fraction(3, 7)
    with pytest.raises(UndefinedValue):
        face_relative_ratio(x, 1, 0)
