from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiplan.errors import (
    BadParameter,
    CycleDetected,
    DuplicateEdge,
    GraphFormatError,
    MissingEndpoint,
    NegativeCost,
    Unreachable,
)
from tiplan.graph import (
    Edge,
    Subgraph,
    TaskGraph,
    as_rational,
    gen_akerlof,
    gen_random_dag,
    parse_graph,
    render_graph,
    render_subgraph,
)

from conftest import small_dags


def brute_dist(g, u):
    costs = [g.path_cost(p) for p in g.all_paths(u, g.target)]
    return min(costs) if costs else None


def test_as_rational_accepts_fraction_forms():
    assert as_rational("9/10") == Fraction(9, 10)
    assert as_rational(3) == Fraction(3)
    assert as_rational(" -2/4 ") == Fraction(-1, 2)


@pytest.mark.parametrize("bad", ["0.9", 0.9, "1/0", "abc", True, "1/2/3"])
def test_as_rational_rejects_decimals_and_junk(bad):
    with pytest.raises(BadParameter):
        as_rational(bad)


def test_akerlof_k3_distance_uses_direct_edge():
    g = gen_akerlof(3, "1/2")
    assert g.dist("v1") == 1
    assert g.cost("v2", "t") == 2
    assert g.cost("v1", "v2") == 0
    assert g.shortest_path("v1") == ("v1", "t")


@pytest.mark.parametrize(
    "nodes, edges, err",
    [
        (("s", "t"), (("s", "t", 1), ("t", "s", 1)), CycleDetected),
        (("s", "t"), (("s", "t", -1),), NegativeCost),
        (("s", "t"), (("s", "x", 1),), MissingEndpoint),
        (("s", "t"), (("s", "t", 1), ("s", "t", 2)), DuplicateEdge),
    ],
)
def test_validation_errors(nodes, edges, err):
    with pytest.raises(err):
        TaskGraph(nodes, edges, "s", "t")


def test_missing_endpoint_node():
    with pytest.raises(MissingEndpoint):
        TaskGraph(("s",), (), "s", "t")


def test_unreachable_distance_raises():
    g = TaskGraph(("s", "a", "t"), (("s", "a", 1),), "s", "t")
    assert not g.reaches_target()
    with pytest.raises(Unreachable):
        g.dist("s")


def test_random_dags_validate_over_1000_seeds():
    for seed in range(1000):
        g = gen_random_dag(10, seed=seed)
        assert g.reaches_target()
        assert list(g.topo_order).index(g.start) < list(g.topo_order).index(g.target)


def test_random_dag_is_deterministic():
    assert gen_random_dag(9, seed=5) == gen_random_dag(9, seed=5)


@settings(max_examples=150, deadline=None)
@given(small_dags(backbone=False))
def test_distances_match_path_enumeration(g):
    d = g.distances_to()
    for u in g.nodes:
        assert d.get(u) == brute_dist(g, u)


@settings(max_examples=100, deadline=None)
@given(small_dags())
def test_shortest_path_is_lex_first_minimum(g):
    p = g.shortest_path(g.start)
    best = brute_dist(g, g.start)
    assert g.path_cost(p) == best
    minimal = [q for q in g.all_paths(g.start, g.target) if g.path_cost(q) == best]
    assert p == min(minimal)


@settings(max_examples=100, deadline=None)
@given(small_dags(backbone=False))
def test_render_parse_round_trip(g):
    assert parse_graph(render_graph(g)) == g


def test_parse_rejects_garbage():
    with pytest.raises(GraphFormatError):
        parse_graph("node s\nnode t\nedge s t 0.5\nstart s\ntarget t\n")
    with pytest.raises(GraphFormatError):
        parse_graph("node s\nstart s\n")
    with pytest.raises(GraphFormatError):
        parse_graph("vertex s\n")


def test_subgraph_queries_and_prune():
    g = TaskGraph(
        ("s", "a", "b", "t"),
        (Edge("s", "a", 1), Edge("a", "t", 1), Edge("s", "b", 0), Edge("b", "t", 5)),
        "s",
        "t",
    )
    full = Subgraph.full(g)
    assert full.dist("s") == 2
    sub = full.without_edge(("s", "a"))
    assert sub.dist("s") == 5
    pruned = sub.without_edge(("a", "t")).prune_isolated()
    assert "a" not in pruned.kept_nodes
    assert pruned.to_graph().edge_key_set == {("s", "b"), ("b", "t")}
    text = render_subgraph(pruned)
    assert text.count("# kept-edge") == 2


@settings(max_examples=60, deadline=None)
@given(small_dags(), st.data())
def test_subgraph_distance_never_below_parent(g, data):
    keys = list(g.edge_keys)
    kept = data.draw(st.sets(st.sampled_from(keys))) if keys else set()
    sub = Subgraph.from_edges(g, kept)
    full = g.distances_to()
    for u, du in sub.distances_to().items():
        assert du >= full[u]


def test_all_paths_lex_order():
    g = gen_akerlof(4, "1/2")
    paths = list(g.all_paths("v1", "t"))
    assert paths == sorted(paths)
    assert len(paths) == 3
    assert all(a != b for a, b in itertools.combinations(paths, 2))
