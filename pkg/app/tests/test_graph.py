"""Test graph construction, queries and the edge-list format."""

from __future__ import annotations

import io
import itertools
from pathlib import Path

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from app.errors import EdgeListParseError, NodeOutOfRangeError, SelfLoopError, UndefinedDensityError
from app.graph import Graph, load_graph, read_edge_list, save_graph, write_edge_list


def complete_graph(n: int) -> Graph:
    return Graph.from_edge_list(n, itertools.combinations(range(n), 2))


@st.composite
def random_graphs(draw: st.DrawFn, max_nodes: int = 12) -> Graph:
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edge_list(n, chosen)


class TestFromEdgeList:
    """Test graph construction from endpoint pairs."""

    def test_duplicates_collapse(self) -> None:
        """Test that repeated and reversed pairs become one edge."""
        graph = Graph.from_edge_list(3, [(0, 1), (1, 0), (1, 2)])

        assert graph.edge_count == 2
        assert graph.edges.tolist() == [[0, 1], [1, 2]]

    def test_complete_graph(self) -> None:
        """Test K4 from all six pairs."""
        assert complete_graph(4).edge_count == 6

    def test_self_loop_rejected(self) -> None:
        """Test that a loop raises a loop error."""
        with pytest.raises(SelfLoopError):
            Graph.from_edge_list(2, [(0, 0)])

    def test_endpoint_out_of_range(self) -> None:
        """Test that an endpoint >= n is rejected."""
        with pytest.raises(NodeOutOfRangeError):
            Graph.from_edge_list(3, [(0, 3)])

    def test_edges_are_immutable(self) -> None:
        """Test that the edge array cannot be modified in place."""
        graph = complete_graph(3)

        with pytest.raises(ValueError):
            graph.edges[0, 0] = 2

    def test_equality_ignores_input_order(self) -> None:
        """Test that graphs with the same edge set compare equal."""
        a = Graph.from_edge_list(4, [(2, 3), (0, 1)])
        b = Graph.from_edge_list(4, [(1, 0), (3, 2), (0, 1)])

        assert a == b
        assert hash(a) == hash(b)
        assert a != Graph.from_edge_list(5, [(0, 1), (2, 3)])

    @given(random_graphs())
    def test_handshake(self, graph: Graph) -> None:
        """Test that degrees sum to twice the edge count and adjacency is symmetric."""
        assert int(graph.degrees.sum()) == 2 * graph.edge_count
        for i in range(graph.node_count):
            assert i not in graph.neighbors(i)
            for j in graph.neighbors(i):
                assert i in graph.neighbors(j)


class TestQueries:
    """Test degree, triangle and clustering queries."""

    def test_degree(self) -> None:
        """Test degrees of K4, an empty graph and a path."""
        path = Graph.from_edge_list(3, [(0, 1), (1, 2)])

        assert complete_graph(4).degree(2) == 3
        assert Graph.empty(5).degree(4) == 0
        assert path.degree(1) == 2

    def test_degree_out_of_range(self) -> None:
        """Test that querying a missing node raises."""
        with pytest.raises(NodeOutOfRangeError):
            complete_graph(3).degree(3)

    def test_triangles(self) -> None:
        """Test triangles in K3, a star and K4 minus an edge."""
        star = Graph.from_edge_list(5, [(0, i) for i in range(1, 5)])
        k4_minus = Graph.from_edge_list(4, [e for e in itertools.combinations(range(4), 2) if e != (2, 3)])

        assert complete_graph(3).triangles_at(1) == 1
        assert star.triangles_at(0) == 0
        assert k4_minus.triangles_at(0) == 2

    def test_local_clustering(self) -> None:
        """Test C(i) for K4 minus an edge, a leaf and a complete graph."""
        k4_minus = Graph.from_edge_list(4, [e for e in itertools.combinations(range(4), 2) if e != (2, 3)])
        path = Graph.from_edge_list(3, [(0, 1), (1, 2)])

        assert k4_minus.local_clustering(0) == pytest.approx(2 / 3)
        assert k4_minus.local_clustering(2) == 1.0
        assert path.local_clustering(0) == 0.0
        assert path.local_clustering(1) == 0.0
        assert complete_graph(5).local_clustering(3) == 1.0

    def test_edge_density(self) -> None:
        """Test density of K5, an empty graph and the undefined case."""
        assert complete_graph(5).edge_density() == 1.0
        assert Graph.empty(4).edge_density() == 0.0
        with pytest.raises(UndefinedDensityError):
            Graph.empty(1).edge_density()

    @hypothesis_settings(max_examples=60)
    @given(random_graphs(max_nodes=15))
    def test_vectorized_kernel_matches_scalar_queries(self, graph: Graph) -> None:
        """Test that the matrix triangle kernel agrees with set intersections."""
        for i in range(graph.node_count):
            assert graph.triangle_counts()[i] == graph.triangles_at(i)
            assert graph.local_clusterings()[i] == graph.local_clustering(i)

    @hypothesis_settings(max_examples=60)
    @given(random_graphs(max_nodes=15))
    def test_matches_networkx(self, graph: Graph) -> None:
        """Test triangle counts and clustering against networkx."""
        reference = nx.Graph()
        reference.add_nodes_from(range(graph.node_count))
        reference.add_edges_from(graph.edges.tolist())

        triangles = nx.triangles(reference)
        clustering = nx.clustering(reference)
        for i in range(graph.node_count):
            assert graph.triangles_at(i) == triangles[i]
            assert graph.local_clustering(i) == pytest.approx(clustering[i], abs=1e-12)

    def test_sparse_kernel_matches_dense(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that the sparse triangle kernel gives the dense result."""
        rng = np.random.default_rng(3)
        pairs = np.array(list(itertools.combinations(range(40), 2)))
        edges = pairs[rng.random(len(pairs)) < 0.3]
        dense = Graph.from_edge_list(40, edges).triangle_counts()

        monkeypatch.setattr("app.graph.settings.dense_kernel_max_nodes", 10)
        sparse_counts = Graph.from_edge_list(40, edges).triangle_counts()

        assert np.array_equal(dense, sparse_counts)


class TestEdgeListFormat:
    """Test the `n m` edge-list text format."""

    def test_write(self) -> None:
        """Test header and one line per canonical edge."""
        stream = io.StringIO()
        write_edge_list(Graph.from_edge_list(3, [(1, 0), (2, 1)]), stream)

        assert stream.getvalue() == "3 2\n0 1\n1 2\n"

    def test_read_skips_blank_lines(self) -> None:
        """Test that blank lines are ignored."""
        graph = read_edge_list(io.StringIO("\n3 2\n\n0 1\n1 2\n\n"))

        assert graph == Graph.from_edge_list(3, [(0, 1), (1, 2)])

    def test_read_reports_line_numbers(self) -> None:
        """Test that malformed lines are reported with their number."""
        with pytest.raises(EdgeListParseError, match="line 3") as excinfo:
            read_edge_list(io.StringIO("3 2\n0 1\n1 x\n"))

        assert excinfo.value.line_number == 3

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "3 1\n0 3\n",
            "3 1\n1 1\n",
            "3 1\n0 1\n1 2\n",
            "3 2\n0 1\n",
            "3\n",
        ],
    )
    def test_read_rejects_malformed(self, text: str) -> None:
        """Test missing header, bad endpoints, loops and wrong edge counts."""
        with pytest.raises(EdgeListParseError):
            read_edge_list(io.StringIO(text))

    def test_save_and_load(self, tmp_path: Path) -> None:
        """Test that a saved graph loads back equal and no temp file remains."""
        graph = complete_graph(6)
        path = tmp_path / "k6.txt"

        save_graph(graph, path)

        assert load_graph(path) == graph
        assert [p.name for p in tmp_path.iterdir()] == ["k6.txt"]

    def test_load_rejects_invalid_utf8(self, tmp_path: Path) -> None:
        """Test that undecodable bytes become a parse error on their line."""
        path = tmp_path / "bad.txt"
        path.write_bytes(b"3 1\n0 \xff\n")

        with pytest.raises(EdgeListParseError, match="line 2") as excinfo:
            load_graph(path)

        assert excinfo.value.line_number == 2

    def test_load_accepts_crlf(self, tmp_path: Path) -> None:
        """Test Windows line endings."""
        path = tmp_path / "crlf.txt"
        path.write_bytes(b"3 2\r\n0 1\r\n1 2\r\n")

        assert load_graph(path) == Graph.from_edge_list(3, [(0, 1), (1, 2)])
