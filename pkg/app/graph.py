"""Simple undirected graphs with degree, triangle and local clustering queries."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, BinaryIO, Optional, TextIO

import numpy as np
from scipy import sparse

from app.config import settings
from app.errors import (
    EdgeListParseError,
    NodeOutOfRangeError,
    SelfLoopError,
    UndefinedDensityError,
    require_at_least,
)
from app.storage import atomic_write

EdgeArray = np.ndarray[Any, np.dtype[np.int64]]


def _readonly(array: np.ndarray[Any, Any]) -> np.ndarray[Any, Any]:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable simple undirected graph on nodes 0..n-1.

    Node ids are zero-based; a 1-based label k maps to node k - 1.
    ``edges`` holds each edge once as (u, v) with u < v, rows sorted.
    """

    node_count: int
    edges: EdgeArray

    @classmethod
    def from_edge_list(cls, n: int, edges: Iterable[Sequence[int]] | np.ndarray[Any, Any]) -> Graph:
        """
        Build a graph from endpoint pairs.

        Duplicate and reversed duplicate pairs collapse to one edge.

        Raises:
            NodeOutOfRangeError: an endpoint is outside [0, n)
            SelfLoopError: a pair (i, i) is present
        """
        n = require_at_least(n, 0, "n")
        pairs = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
        pairs = pairs.reshape(-1, 2)

        out_of_range = np.flatnonzero(((pairs < 0) | (pairs >= n)).any(axis=1))
        if out_of_range.size:
            u, v = pairs[out_of_range[0]]
            raise NodeOutOfRangeError(f"edge ({u}, {v}) has an endpoint outside [0, {n})", "edges")

        loops = np.flatnonzero(pairs[:, 0] == pairs[:, 1])
        if loops.size:
            u = pairs[loops[0], 0]
            raise SelfLoopError(f"self-loop ({u}, {u}) is not allowed", "edges")

        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        keys = np.unique(lo * max(n, 1) + hi)
        canonical = np.column_stack((keys // max(n, 1), keys % max(n, 1))).astype(np.int64)
        return cls(node_count=n, edges=_readonly(canonical))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls.from_edge_list(n, np.empty((0, 2), dtype=np.int64))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count})"

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray[Any, np.dtype[np.int64]]:
        """Degree of every node."""
        counts = np.bincount(self.edges.ravel(), minlength=self.node_count).astype(np.int64)
        return _readonly(counts)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        """Neighbor set of every node."""
        neighbors: list[set[int]] = [set() for _ in range(self.node_count)]
        for u, v in self.edges.tolist():
            neighbors[u].add(v)
            neighbors[v].add(u)
        return tuple(frozenset(s) for s in neighbors)

    def _check_node(self, i: int) -> int:
        if not 0 <= i < self.node_count:
            raise NodeOutOfRangeError(f"node {i} outside [0, {self.node_count})", "node")
        return int(i)

    def neighbors(self, i: int) -> frozenset[int]:
        return self.adjacency[self._check_node(i)]

    def has_edge(self, i: int, j: int) -> bool:
        return self._check_node(j) in self.adjacency[self._check_node(i)]

    def degree(self, i: int) -> int:
        return int(self.degrees[self._check_node(i)])

    def triangles_at(self, i: int) -> int:
        """
        Count unordered neighbor pairs {j, k} of i that are adjacent.

        Each pair is seen once from j and once from k, hence the halving.
        Set intersection walks the smaller of the two neighbor sets.
        """
        neighbors = self.adjacency[self._check_node(i)]
        shared = sum(len(neighbors & self.adjacency[j]) for j in neighbors)
        return shared // 2

    def local_clustering(self, i: int) -> float:
        """C(i) = triangles / C(d_i, 2); zero when d_i <= 1."""
        d = self.degree(i)
        if d < 2:
            return 0.0
        return self.triangles_at(i) / (d * (d - 1) // 2)

    def triangle_counts(self) -> np.ndarray[Any, np.dtype[np.int64]]:
        """Triangles through every node, from diag(A^3) / 2."""
        return self._triangle_counts

    @cached_property
    def _triangle_counts(self) -> np.ndarray[Any, np.dtype[np.int64]]:
        n = self.node_count
        if self.edge_count == 0:
            return _readonly(np.zeros(n, dtype=np.int64))
        rows = np.concatenate((self.edges[:, 0], self.edges[:, 1]))
        cols = np.concatenate((self.edges[:, 1], self.edges[:, 0]))
        if n <= settings.dense_kernel_max_nodes:
            # 0/1 products stay exact in float64 well below 2**53
            dense = np.zeros((n, n), dtype=np.float64)
            dense[rows, cols] = 1.0
            paths = ((dense @ dense) * dense).sum(axis=1)
            counts = np.rint(paths).astype(np.int64) // 2
        else:
            adj = sparse.csr_matrix(
                (np.ones(rows.size, dtype=np.int64), (rows, cols)), shape=(n, n)
            )
            paths = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel()
            counts = paths.astype(np.int64) // 2
        return _readonly(counts)

    @cached_property
    def _local_clusterings(self) -> np.ndarray[Any, np.dtype[np.float64]]:
        degrees = self.degrees
        pairs = degrees * (degrees - 1) // 2
        values = np.zeros(self.node_count, dtype=np.float64)
        np.divide(self.triangle_counts(), pairs, out=values, where=pairs > 0)
        return _readonly(values)

    def local_clusterings(self) -> np.ndarray[Any, np.dtype[np.float64]]:
        """C(i) for every node, same arithmetic as local_clustering."""
        return self._local_clusterings

    def average_clustering(self) -> float:
        if self.node_count == 0:
            return 0.0
        return float(self.local_clusterings().mean())

    def edge_density(self) -> float:
        """Edge count over C(n, 2)."""
        if self.node_count < 2:
            raise UndefinedDensityError(
                f"edge density needs at least 2 nodes, got {self.node_count}", "n"
            )
        return self.edge_count / math.comb(self.node_count, 2)


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    """Write `n m` followed by one `i j` line per edge."""
    stream.write(f"{graph.node_count} {graph.edge_count}\n")
    stream.writelines(f"{u} {v}\n" for u, v in graph.edges.tolist())


def read_edge_list(stream: Iterable[str]) -> Graph:
    """
    Parse the edge-list text format.

    Blank lines are ignored. Duplicate and reversed duplicate edges are
    accepted and collapse; loops and out-of-range endpoints are rejected.

    Raises:
        EdgeListParseError: malformed content, with the offending line number
    """
    header: Optional[tuple[int, int]] = None
    header_line = 0
    pairs: list[tuple[int, int]] = []

    for line_number, raw in enumerate(stream, start=1):
        fields = raw.split()
        if not fields:
            continue
        if len(fields) != 2:
            raise EdgeListParseError(f"expected two integers, got {raw.strip()!r}", line_number)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListParseError(
                f"expected two integers, got {raw.strip()!r}", line_number
            ) from None

        if header is None:
            if a < 0 or b < 0:
                raise EdgeListParseError("node and edge counts must be nonnegative", line_number)
            header, header_line = (a, b), line_number
            continue

        n = header[0]
        if not (0 <= a < n and 0 <= b < n):
            raise EdgeListParseError(f"edge ({a}, {b}) has an endpoint outside [0, {n})", line_number)
        if a == b:
            raise EdgeListParseError(f"self-loop ({a}, {a}) is not allowed", line_number)
        if len(pairs) == header[1]:
            raise EdgeListParseError(f"more than the {header[1]} edges declared", line_number)
        pairs.append((a, b))

    if header is None:
        raise EdgeListParseError("missing `n m` header", 1)
    if len(pairs) != header[1]:
        raise EdgeListParseError(
            f"header declares {header[1]} edges, found {len(pairs)}", header_line
        )
    return Graph.from_edge_list(header[0], pairs)


def save_graph(graph: Graph, path: Path) -> None:
    """Write graph to path atomically."""
    with atomic_write(path) as stream:
        write_edge_list(graph, stream)


def load_graph(path: Path) -> Graph:
    with Path(path).open("rb") as stream:
        return read_edge_list(_decoded_lines(stream))


def _decoded_lines(stream: BinaryIO) -> Iterator[str]:
    for line_number, raw in enumerate(stream, start=1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EdgeListParseError(
                f"not valid UTF-8 at byte {exc.start}: {exc.reason}", line_number
            ) from None
