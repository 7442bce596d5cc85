"""
Test graph specifications and the even-degree bipartition
"""
import networkx as nx
import pytest

from src.states.graphs import GraphSpec, even_degree_bipartition
from src.utils.errors import ArgumentError, NotCertifiableError, RecordFormatError


def test_constructors():
    path = GraphSpec.path(4)
    assert path.sorted_edges() == [(1, 2), (2, 3), (3, 4)]
    assert path.neighbors(2) == (1, 3)
    assert path.closed_neighborhood(1) == (1, 2)
    assert path.degree(4) == 1

    assert GraphSpec.cycle(4).sorted_edges() == [(1, 2), (1, 4), (2, 3), (3, 4)]
    assert len(GraphSpec.complete(5).edges) == 10
    assert GraphSpec.empty(3).edges == frozenset()
    assert GraphSpec.from_edges(3, [(2, 1)]).sorted_edges() == [(1, 2)]


@pytest.mark.parametrize(
    "build",
    [
        lambda: GraphSpec(0, frozenset()),
        lambda: GraphSpec(3, frozenset({(1, 1)})),
        lambda: GraphSpec(3, frozenset({(1, 4)})),
        lambda: GraphSpec.from_edges(3, [(1, 2), (2, 1)]),
        lambda: GraphSpec.cycle(2),
    ],
)
def test_invalid_graphs(build):
    with pytest.raises(ArgumentError):
        build()


def test_text_format(tmp_path):
    text = "# a path with an isolated vertex\nn 4\n1 2\n2 3  # middle edge\n"
    graph = GraphSpec.parse(text)
    assert graph.n_vertices == 4
    assert graph.sorted_edges() == [(1, 2), (2, 3)]
    assert graph.to_text() == "n 4\n1 2\n2 3\n"

    path = tmp_path / "g.edges"
    path.write_text(graph.to_text())
    assert GraphSpec.load(path) == graph


@pytest.mark.parametrize("text", ["1 2 3\n", "1 x\n", "1 2\n1 2\n", "# nothing\n", "1 1\n"])
def test_malformed_edge_lists(text):
    with pytest.raises(RecordFormatError):
        GraphSpec.parse(text)


def test_missing_file(tmp_path):
    with pytest.raises(RecordFormatError):
        GraphSpec.load(tmp_path / "missing.edges")


def test_networkx_round_trip(rng):
    graph = GraphSpec.random(7, 0.4, rng)
    assert GraphSpec.from_networkx(graph.to_networkx()) == graph
    with pytest.raises(ArgumentError):
        GraphSpec.from_networkx(nx.path_graph(3))


@pytest.mark.parametrize(
    "graph, expected",
    [
        (GraphSpec.path(3), ((2,), (1, 3))),
        (GraphSpec.path(5), ((2, 4), (1, 3, 5))),
        (GraphSpec.cycle(4), ((1, 3), (2, 4))),
        (GraphSpec.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)]), ((1,), (2, 3, 4, 5))),
        (GraphSpec.empty(2), ((1, 2), ())),
    ],
)
def test_even_degree_bipartition(graph, expected):
    side_a, side_b = even_degree_bipartition(graph)
    assert (side_a, side_b) == expected
    assert all(graph.degree(v) % 2 == 0 for v in side_a)


def test_odd_cycle_is_not_certifiable():
    with pytest.raises(NotCertifiableError) as info:
        even_degree_bipartition(GraphSpec.cycle(5))
    assert info.value.vertex in range(1, 6)


@pytest.mark.parametrize("graph", [GraphSpec.path(4), GraphSpec.path(6)])
def test_odd_degree_on_both_sides(graph):
    with pytest.raises(NotCertifiableError) as info:
        even_degree_bipartition(graph)
    assert info.value.vertex == 1
