from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isogkm.sparsity import (
    Disconnected,
    DuplicateEdge,
    IndexOutOfRange,
    LieType,
    MalformedLine,
    NotGeneric,
    SelfLoop,
    SparsityGraph,
    connected_graphs,
    enumerate_labels,
    parse_graph,
    parse_lambda,
    transpose,
    validate_spectrum,
)
from isogkm.matops import fixed_point_matrix


def test_parse_smallest():
    g = parse_graph("1 2")
    assert g == SparsityGraph(2, ((1, 2),))


def test_parse_complete_three():
    assert parse_graph("1 2\n2 3\n1 3") == SparsityGraph.complete(3)


def test_parse_comments_and_header():
    g = parse_graph("# triangle\nn 3\n1 2  # first\n\n3 2\n")
    assert g.n == 3 and g.edges == ((1, 2), (2, 3))


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("1 2\n3 4", Disconnected, 2),
        ("1 2\n2 1", DuplicateEdge, 2),
        ("1 2\n2 2", SelfLoop, 2),
        ("n 2\n1 2\n2 3", IndexOutOfRange, 3),
        ("1 2\n1 x", MalformedLine, 2),
        ("1 2 3", MalformedLine, 1),
        ("1 2\nn 2", MalformedLine, 2),
    ],
)
def test_parse_errors_name_line(text, exc, line):
    with pytest.raises(exc) as info:
        parse_graph(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_isolated_vertex_from_header_is_disconnected():
    with pytest.raises(Disconnected):
        parse_graph("n 3\n1 2")


@given(st.integers(1, 4).flatmap(lambda n: st.sampled_from(connected_graphs(n))))
def test_round_trip(g):
    assert parse_graph(g.to_text()) == g
    assert parse_graph(parse_graph(g.to_text()).to_text()) == g


def test_connected_graph_counts():
    # labelled connected graphs on 1..4 vertices
    assert [len(connected_graphs(n)) for n in range(1, 5)] == [1, 1, 4, 38]


def test_spectrum_ok():
    lam = validate_spectrum([3, 1], LieType.D)
    assert lam.values == (3.0, 1.0)


@pytest.mark.parametrize(
    "values, mode, reason",
    [([1, 1, 2], "A", "repeat"), ([1, -1], "D", "abs-repeat"), ([2, 0], "D", "zero"), (["0.1", "0.10"], "A", "repeat")],
)
def test_spectrum_not_generic(values, mode, reason):
    with pytest.raises(NotGeneric) as info:
        validate_spectrum(values, mode)
    assert info.value.reason == reason


def test_abs_repeat_makes_fixed_points_collide():
    # with |l1| = |l2| two different labels give the same matrix
    lam = (1.0, -1.0)
    A = fixed_point_matrix((1, 2), (0, 0), lam)
    B = fixed_point_matrix((2, 1), (1, 1), lam)
    assert (A == B).all()


def test_type_A_allows_zero_and_opposite():
    validate_spectrum([1, -1, 0], "A")


def test_exact_decimal_comparison():
    lam = parse_lambda("0.1, 0.2", "D")
    assert lam.exact == (Fraction(1, 10), Fraction(1, 5))
    # distinct decimals that are close are still accepted
    validate_spectrum(["1.0000000000000001", "1"], "A")


def test_labels_small():
    assert enumerate_labels(2, "A") == [(1, 2), (2, 1)]
    assert len(enumerate_labels(2, "D")) == 8
    assert enumerate_labels(1, "D") == [((1,), (0,)), ((1,), (1,))]


def test_labels_order_type_D():
    labels = enumerate_labels(2, "D")
    assert labels[:4] == [((1, 2), s) for s in [(0, 0), (0, 1), (1, 0), (1, 1)]]


@settings(max_examples=10)
@given(st.integers(1, 5))
def test_label_counts(n):
    a = enumerate_labels(n, LieType.A)
    d = enumerate_labels(n, LieType.D)
    assert len(a) == len(set(a)) == factorial(n)
    assert len(d) == len(set(d)) == 2**n * factorial(n)


def test_transpose_swaps_positions():
    assert transpose((1, 2, 3), 1, 3) == (3, 2, 1)
    assert transpose((2, 3, 1), 1, 2) == (3, 2, 1)
