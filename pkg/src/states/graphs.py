"""
UCERT - Graph specifications

Undirected simple graphs on vertices 1..n, the targets of graph-state
certification. Edge-list text format: one "u v" pair per line (1-indexed), "#"
comments, optional "n <count>" header for isolated trailing vertices.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from ..utils.errors import ArgumentError, NotCertifiableError, RecordFormatError
from ..utils.logger import get_logger

logger = get_logger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class GraphSpec:
    """
    Simple undirected graph with 1-indexed vertices.

    Example:
        >>> g = GraphSpec.path(3)
        >>> g.neighbors(2)
        (1, 3)
    """
    n_vertices: int
    edges: FrozenSet[Edge]

    def __post_init__(self):
        if not isinstance(self.n_vertices, (int, np.integer)) or self.n_vertices < 1:
            raise ArgumentError(f"n_vertices must be a positive integer, got {self.n_vertices!r}")

        normalised = set()
        for edge in self.edges:
            u, v = (int(e) for e in edge)
            if u == v:
                raise ArgumentError(f"Self-loop on vertex {u}")
            for w in (u, v):
                if not 1 <= w <= self.n_vertices:
                    raise ArgumentError(f"Vertex {w} outside 1..{self.n_vertices}")
            normalised.add((min(u, v), max(u, v)))

        object.__setattr__(self, "n_vertices", int(self.n_vertices))
        object.__setattr__(self, "edges", frozenset(normalised))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Edge]) -> "GraphSpec":
        edges = list(edges)
        seen = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ArgumentError(f"Duplicate edge {key}")
            seen.add(key)
        return cls(n_vertices, frozenset(edges))

    @classmethod
    def empty(cls, n_vertices: int) -> "GraphSpec":
        return cls(n_vertices, frozenset())

    @classmethod
    def path(cls, n_vertices: int) -> "GraphSpec":
        """1D chain 1-2-...-N."""
        return cls(n_vertices, frozenset((i, i + 1) for i in range(1, n_vertices)))

    @classmethod
    def cycle(cls, n_vertices: int) -> "GraphSpec":
        if n_vertices < 3:
            raise ArgumentError("A cycle needs at least 3 vertices")
        edges = {(i, i + 1) for i in range(1, n_vertices)} | {(1, n_vertices)}
        return cls(n_vertices, frozenset(edges))

    @classmethod
    def complete(cls, n_vertices: int) -> "GraphSpec":
        edges = {(u, v) for u in range(1, n_vertices + 1) for v in range(u + 1, n_vertices + 1)}
        return cls(n_vertices, frozenset(edges))

    @classmethod
    def random(cls, n_vertices: int, edge_probability: float, rng: np.random.Generator) -> "GraphSpec":
        """Erdős–Rényi G(n, p) drawn from ``rng``."""
        if not 0.0 <= edge_probability <= 1.0:
            raise ArgumentError(f"edge_probability must be in [0, 1], got {edge_probability}")
        edges = [
            (u, v)
            for u in range(1, n_vertices + 1)
            for v in range(u + 1, n_vertices + 1)
            if rng.random() < edge_probability
        ]
        return cls(n_vertices, frozenset(edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "GraphSpec":
        nodes = sorted(graph.nodes)
        if nodes != list(range(1, len(nodes) + 1)):
            raise ArgumentError("networkx graph must use vertices 1..n")
        return cls(len(nodes), frozenset(graph.edges))

    # -- text format --------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "GraphSpec":
        n_header: Optional[int] = None
        edges: List[Edge] = []

        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            try:
                if fields[0].lower() == "n" and len(fields) == 2:
                    n_header = int(fields[1])
                    continue
                if len(fields) != 2:
                    raise ValueError(f"expected 'u v', got {line!r}")
                edges.append((int(fields[0]), int(fields[1])))
            except ValueError as e:
                raise RecordFormatError(f"Edge list line {lineno}: {e}") from None

        max_vertex = max((max(e) for e in edges), default=0)
        n = n_header if n_header is not None else max_vertex
        if n < 1:
            raise RecordFormatError("Edge list defines no vertices (add an 'n <count>' line)")
        try:
            return cls.from_edges(n, edges)
        except ArgumentError as e:
            raise RecordFormatError(f"Invalid edge list: {e}") from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "GraphSpec":
        path = Path(path)
        if not path.exists():
            raise RecordFormatError(f"Graph file not found: {path}")
        graph = cls.parse(path.read_text())
        logger.debug(f"Loaded graph from {path}: n={graph.n_vertices}, |E|={len(graph.edges)}")
        return graph

    def to_text(self) -> str:
        lines = [f"n {self.n_vertices}"]
        lines.extend(f"{u} {v}" for u, v in self.sorted_edges())
        return "\n".join(lines) + "\n"

    # -- structure ----------------------------------------------------------

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n_vertices + 1)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        return tuple(sorted(out))

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def closed_neighborhood(self, v: int) -> Tuple[int, ...]:
        """V'(v): v together with its neighbours, sorted."""
        return tuple(sorted((v,) + self.neighbors(v)))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    @property
    def label(self) -> str:
        return f"graph(n={self.n_vertices}, edges={self.sorted_edges()})"

    def __repr__(self) -> str:
        return f"GraphSpec(n={self.n_vertices}, |E|={len(self.edges)})"


def even_degree_bipartition(graph: GraphSpec) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Find a bipartition (A, B) with every vertex of A of even degree.

    Each connected component is 2-coloured independently; per component the side
    holding its smallest vertex is taken as A when it is all-even, otherwise the
    other side. Isolated vertices (degree 0) go to A.

    Returns:
        (A, B), each sorted

    Raises:
        NotCertifiableError: graph not bipartite, or some component has an
            odd-degree vertex on both sides (``vertex`` names one of them)
    """
    g = graph.to_networkx()
    side_a: List[int] = []
    side_b: List[int] = []

    for component in sorted(nx.connected_components(g), key=min):
        sub = g.subgraph(component)
        if not nx.is_bipartite(sub):
            cycle = nx.find_cycle(sub)
            raise NotCertifiableError(
                f"Graph is not bipartite (odd cycle through vertex {cycle[0][0]})",
                vertex=int(cycle[0][0])
            )
        colouring = nx.bipartite.color(sub)
        first = min(component)
        same = sorted(v for v in component if colouring[v] == colouring[first])
        other = sorted(v for v in component if colouring[v] != colouring[first])

        odd_same = [v for v in same if g.degree(v) % 2]
        odd_other = [v for v in other if g.degree(v) % 2]
        if not odd_same:
            side_a.extend(same)
            side_b.extend(other)
        elif not odd_other:
            side_a.extend(other)
            side_b.extend(same)
        else:
            raise NotCertifiableError(
                f"No partition side is all even-degree (vertex {odd_same[0]} has "
                f"degree {g.degree(odd_same[0])}, vertex {odd_other[0]} has degree "
                f"{g.degree(odd_other[0])})",
                vertex=int(odd_same[0])
            )

    return tuple(sorted(side_a)), tuple(sorted(side_b))
