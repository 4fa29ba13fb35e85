from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_type_A_edges, brute_force_type_D_edges
from isogkm.gkm import (
    EdgeAcrossParity,
    GKMEdge,
    GKMGraph,
    ModeMismatch,
    build_type_A,
    build_type_D,
    component_isomorphism,
    format_weight,
    lift_to_type_D,
    moment_image,
    normalize_weight,
    split_components,
    validate_gkm,
)
from isogkm.sparsity import LieType, SparsityGraph, connected_graphs, parity, validate_spectrum

K2 = SparsityGraph.complete(2)
K3 = SparsityGraph.complete(3)
P3 = SparsityGraph.path(3)

small_graphs = st.integers(2, 4).flatmap(lambda n: st.sampled_from(connected_graphs(n)))


def as_oracle_edges(gr):
    return {
        frozenset([gr.vertices[e.u], gr.vertices[e.v]]) | {("w", e.weight, e.pair)} for e in gr.edges
    }


def test_weight_normalization():
    assert normalize_weight((-1, 1)) == (1, -1)
    assert normalize_weight((0, -1, -1)) == (0, 1, 1)
    assert format_weight((1, -1, 0)) == "e1-e2"
    assert format_weight((0, 1, 1)) == "e2+e3"


def test_type_A_K2_is_gamma():
    gr = build_type_A(K2)
    assert gr.vertices == ((1, 2), (2, 1))
    assert gr.edges == (GKMEdge(0, 1, (1, 2), (1, -1)),)


@pytest.mark.parametrize("g, nv, ne", [(K3, 6, 9), (P3, 6, 6), (SparsityGraph.cycle(4), 24, 48)])
def test_type_A_counts_match_brute_force(g, nv, ne):
    gr = build_type_A(g)
    perms, edges = brute_force_type_A_edges(g.n, set(g.edges))
    assert len(gr.vertices) == nv and len(gr.edges) == ne
    assert {frozenset([gr.vertices[e.u], gr.vertices[e.v]]) for e in gr.edges} == edges
    assert all(e.weight == normalize_weight([1 if k + 1 == e.pair[0] else -1 if k + 1 == e.pair[1] else 0 for k in range(g.n)]) for e in gr.edges)


@pytest.mark.parametrize("g, nv, ne", [(K2, 8, 8), (K3, 48, 144), (P3, 48, 96)])
def test_type_D_matches_brute_force(g, nv, ne):
    gr = build_type_D(g)
    labels, edges = brute_force_type_D_edges(g.n, set(g.edges))
    assert list(gr.vertices) == labels
    assert len(gr.edges) == ne and len(gr.vertices) == nv
    assert as_oracle_edges(gr) == edges


def test_type_D_K2_even_half_edges():
    gr = build_type_D(K2)
    idx = gr.index
    got = {(e.u, e.v): e.weight for e in gr.edges}
    a, b, c = idx(((1, 2), (0, 0))), idx(((2, 1), (0, 0))), idx(((2, 1), (1, 1)))
    assert got[(a, b)] == (1, 1)
    assert got[(a, c)] == (1, -1)


@settings(max_examples=15, deadline=None)
@given(small_graphs)
def test_weight_rule_and_incidence(g):
    gr = build_type_D(g)
    for e in gr.edges:
        s, s2 = gr.vertices[e.u][1], gr.vertices[e.v][1]
        i, j = e.pair
        assert s[j - 1] == s2[j - 1] if s[i - 1] == s2[i - 1] else s[j - 1] != s2[j - 1]
        assert (e.weight[j - 1] == 1) == (s[i - 1] == s2[i - 1])
    for nb in gr.adjacency():
        per_pair = Counter((e.pair, e.weight) for _, e in nb)
        assert all(c == 1 for c in per_pair.values())
        assert len(per_pair) == 2 * g.num_edges


@settings(max_examples=15, deadline=None)
@given(small_graphs)
def test_lift_equals_direct(g):
    assert lift_to_type_D(build_type_A(g)).same_as(build_type_D(g))


def test_lift_single_vertex():
    a = GKMGraph(LieType.A, 1, (), ((1,),), ())
    d = lift_to_type_D(a)
    assert d.vertices == (((1,), (0,)), ((1,), (1,)))
    assert d.edges == ()


def test_lift_rejects_type_D():
    with pytest.raises(ModeMismatch):
        lift_to_type_D(build_type_D(K2))


def test_split_K2_into_four_cycles():
    plus, minus = split_components(build_type_D(K2))
    for half in (plus, minus):
        assert len(half.vertices) == 4 and len(half.edges) == 4
        assert all(len(nb) == 2 for nb in half.adjacency())
        assert len(half.components()) == 1
    assert {parity(s) for _, s in plus.vertices} == {0}
    assert {parity(s) for _, s in minus.vertices} == {1}


def test_split_K3_halves():
    plus, minus = split_components(build_type_D(K3))
    assert (len(plus.vertices), len(plus.edges)) == (24, 72)
    assert (len(minus.vertices), len(minus.edges)) == (24, 72)


def test_split_rejects_cross_edge():
    gr = build_type_D(K2)
    odd = next(k for k, (_, s) in enumerate(gr.vertices) if parity(s))
    bad = GKMGraph(gr.mode, gr.n, gr.gamma, gr.vertices, gr.edges + (GKMEdge(0, odd, (1, 2), (1, 1)),))
    with pytest.raises(EdgeAcrossParity):
        split_components(bad)


def test_component_isomorphism_K2():
    plus, minus = split_components(build_type_D(K2))
    m = component_isomorphism(plus, minus)
    assert minus.vertices[m[plus.index(((1, 2), (0, 0)))]] == ((1, 2), (1, 0))
    e = next(e for e in plus.edges if e.weight == (1, 1) and plus.vertices[e.u] == ((1, 2), (0, 0)))
    img = GKMEdge(*sorted((m[e.u], m[e.v])), e.pair, e.weight)
    assert img in minus.edges
    assert {minus.vertices[img.u], minus.vertices[img.v]} == {((1, 2), (1, 0)), ((2, 1), (1, 0))}


@settings(max_examples=10, deadline=None)
@given(small_graphs)
def test_components_isomorphic(g):
    plus, minus = split_components(build_type_D(g))
    assert len(plus.components()) == len(minus.components()) == 1
    component_isomorphism(plus, minus)


def test_moment_image_K2():
    lam = validate_spectrum([3, 1], "D")
    gr = build_type_D(K2, lam)
    mu = moment_image(gr)
    assert mu[gr.index(((1, 2), (0, 0)))] == (3, 1)
    assert mu[gr.index(((2, 1), (1, 1)))] == (-1, -3)
    u, v = gr.index(((1, 2), (0, 0))), gr.index(((2, 1), (0, 0)))
    assert tuple(a - b for a, b in zip(mu[u], mu[v])) == (2, -2)
    assert moment_image(build_type_A(K2), validate_spectrum(["0.5", 2], "A"))[0] == (Fraction(1, 2), 2)


@pytest.mark.parametrize("g", [K2, K3, P3])
def test_validate_builders(g):
    lam_a = validate_spectrum([5, 3, 1][: g.n], "A")
    lam_d = validate_spectrum([5, 3, 1][: g.n], "D")
    for gr in (build_type_A(g, lam_a), build_type_D(g, lam_d), *split_components(build_type_D(g, lam_d))):
        rep = validate_gkm(gr)
        assert rep.ok, rep.failures()


def test_validate_component_count_full_type_D():
    rep = validate_gkm(build_type_D(K2))
    comp = next(c for c in rep.checks if c.name == "components")
    assert comp.passed and "found 2" in comp.detail


def test_validate_zeroed_weight_has_witness():
    gr = build_type_A(K3)
    e = gr.edges[0]
    bad = GKMGraph(gr.mode, gr.n, gr.gamma, gr.vertices, (GKMEdge(e.u, e.v, e.pair, (0, 0, 0)),) + gr.edges[1:])
    rep = validate_gkm(bad)
    failed = {c.name: c for c in rep.failures()}
    assert "nonzero weights" in failed
    assert failed["nonzero weights"].witness.startswith("123 -- ")


def test_moment_parallelism_is_logged():
    # moment differences are parallel to the axial value on half the edges
    lam = validate_spectrum([5, 3, 1], "D")
    rep = validate_gkm(build_type_D(K3, lam))
    assert rep.notes == ["moment difference parallel to axial weight on 72/144 edges"]
    rep = validate_gkm(build_type_A(K3, validate_spectrum([5, 3, 1], "A")))
    assert rep.notes == ["moment difference parallel to axial weight on 9/9 edges"]
