"""Immutable simple graphs on vertices 1..n plus the structural primitives
(degrees, common neighbors, blocks, contraction, conflict graph) everything
else is built on."""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator

import networkx as nx


class GraphError(ValueError):
    """Malformed graph input or an operation applied outside its domain."""


class ColoringError(ValueError):
    """Malformed or non-total vertex coloring."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph. Vertex ids are the dense range 1..n.

    Instances are immutable: every mutating operation returns a new graph,
    so graphs can be shared freely across concurrent verification tasks.
    """

    n: int
    adj: tuple[frozenset[int], ...]  # index 0 is an unused placeholder

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 1:
            raise GraphError(f"vertex count must be positive, got {n}")
        sets: list[set[int]] = [set() for _ in range(n + 1)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"vertex id out of range in edge ({u}, {v})")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            sets[u].add(v)
            sets[v].add(u)
        return Graph(n, tuple(frozenset(s) for s in sets))

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return self.adj[v]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in self.vertices() for v in sorted(self.adj[u]) if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def max_degree(self) -> int:
        return max((len(self.adj[v]) for v in self.vertices()), default=0)

    def min_degree(self) -> int:
        return min((len(self.adj[v]) for v in self.vertices()), default=0)

    @functools.cached_property
    def masks(self) -> tuple[int, ...]:
        """Adjacency bitmasks; bit v of masks[u] is set iff uv is an edge."""
        out = [0] * (self.n + 1)
        for u in self.vertices():
            m = 0
            for w in self.adj[u]:
                m |= 1 << w
            out[u] = m
        return tuple(out)

    def _check_vertex(self, v: int) -> None:
        if not (1 <= v <= self.n):
            raise GraphError(f"vertex {v} out of range 1..{self.n}")

    def __repr__(self) -> str:  # compact, used in test failure output
        return f"Graph(n={self.n}, m={self.edge_count})"


@dataclass(frozen=True)
class VertexColoring:
    """Total map vertex -> positive color id, stored dense (index v-1)."""

    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.colors:
            raise ColoringError("coloring must cover at least one vertex")
        for v, c in enumerate(self.colors, start=1):
            if not isinstance(c, int) or c < 1:
                raise ColoringError(f"vertex {v} has invalid color {c!r}")

    @staticmethod
    def from_map(mapping: dict[int, int], n: int) -> "VertexColoring":
        if set(mapping) != set(range(1, n + 1)):
            missing = sorted(set(range(1, n + 1)) - set(mapping))
            extra = sorted(set(mapping) - set(range(1, n + 1)))
            raise ColoringError(f"coloring not total: missing={missing} extra={extra}")
        return VertexColoring(tuple(mapping[v] for v in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.colors)

    def of(self, v: int) -> int:
        if not (1 <= v <= len(self.colors)):
            raise ColoringError(f"vertex {v} outside colored range")
        return self.colors[v - 1]

    @property
    def palette(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.colors)))

    @property
    def palette_size(self) -> int:
        return len(set(self.colors))

    def classes(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors, start=1):
            out.setdefault(c, []).append(v)
        return {c: tuple(vs) for c, vs in sorted(out.items())}

    def as_dict(self) -> dict[int, int]:
        return {v: c for v, c in enumerate(self.colors, start=1)}


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks (maximal 2-connected subgraphs or bridges) and cut vertices."""

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]


@dataclass(frozen=True)
class ContractionResult:
    graph: Graph
    vertex_map: dict[int, int]  # old id -> new id; the deleted end maps to the kept end's new id


# ---------------------------------------------------------------------------
# text formats

def parse_edge_list(text: str) -> Graph:
    """Parse the "n m" header plus m "u v" lines format."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"malformed header line: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphError(f"malformed header line: {lines[0]!r}") from exc
    if n < 1 or m < 0:
        raise GraphError(f"invalid counts n={n} m={m}")
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"edge-count mismatch: header says {m}, found {len(body)} edge lines")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"malformed edge line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"malformed edge line: {ln!r}") from exc
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def emit_edge_list(g: Graph) -> str:
    """Inverse of parse_edge_list; output is sorted so round-trips are stable."""
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def to_dot(g: Graph, coloring: VertexColoring | None = None) -> str:
    out = ["graph G {"]
    for v in g.vertices():
        if coloring is not None:
            out.append(f'  {v} [label="{v}:{coloring.of(v)}"];')
        else:
            out.append(f"  {v};")
    for u, v in g.edges():
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


def parse_coloring(text: str, g: Graph) -> VertexColoring:
    """Parse "v c" lines, one per vertex of g, any order."""
    mapping: dict[int, int] = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ColoringError(f"malformed coloring line: {ln!r}")
        try:
            v, c = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ColoringError(f"malformed coloring line: {ln!r}") from exc
        if v in mapping:
            raise ColoringError(f"vertex {v} colored twice")
        if c < 1:
            raise ColoringError(f"color must be positive, got {c} for vertex {v}")
        mapping[v] = c
    return VertexColoring.from_map(mapping, g.n)


def emit_coloring(c: VertexColoring) -> str:
    return "\n".join(f"{v} {c.of(v)}" for v in range(1, c.n + 1)) + "\n"


# ---------------------------------------------------------------------------
# connectivity helpers (bitmask BFS; hot path for the cut search)

def reachable_mask(masks: tuple[int, ...] | list[int], source: int, blocked: int) -> int:
    """Bitmask of vertices reachable from source without entering blocked ones."""
    seen = 1 << source
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen & ~blocked
        seen |= frontier
    return seen


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    reach = reachable_mask(g.masks, 1, 0)
    full = ((1 << (g.n + 1)) - 1) & ~1
    return reach == full


def connected_components(g: Graph) -> list[frozenset[int]]:
    remaining = set(g.vertices())
    comps = []
    while remaining:
        v = min(remaining)
        reach = reachable_mask(g.masks, v, 0)
        comp = frozenset(w for w in remaining if reach >> w & 1)
        comps.append(comp)
        remaining -= comp
    return comps


def induced_subgraph(g: Graph, verts: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph with vertices renumbered 1..k; returns old->new map."""
    ordered = sorted(set(verts))
    for v in ordered:
        g._check_vertex(v)
    remap = {old: i + 1 for i, old in enumerate(ordered)}
    edges = [
        (remap[u], remap[v])
        for u in ordered
        for v in g.adj[u]
        if u < v and v in remap
    ]
    return Graph.from_edges(len(ordered), edges), remap


# ---------------------------------------------------------------------------
# structural primitives

def common_neighbors(g: Graph, x: int, y: int) -> frozenset[int]:
    if x == y:
        raise GraphError("common_neighbors needs two distinct vertices")
    return g.neighbors(x) & g.neighbors(y)


def m_set(g: Graph, x: int, y: int) -> frozenset[int]:
    """Common neighbors of x and y that have degree exactly two."""
    return frozenset(z for z in common_neighbors(g, x, y) if g.degree(z) == 2)


def t_set(g: Graph, u: int) -> frozenset[int]:
    """Degree->=3 vertices reachable from u directly or through one 2-vertex."""
    g._check_vertex(u)
    out = set()
    for x in g.vertices():
        if x == u or g.degree(x) < 3:
            continue
        if g.has_edge(u, x):
            out.add(x)
            continue
        for z in g.adj[u]:
            if g.degree(z) == 2 and g.has_edge(z, x):
                out.add(x)
                break
    return frozenset(out)


def contract_edge(g: Graph, u: int, v: int) -> ContractionResult:
    """Contract edge uv: delete v, attach its other neighbors to u, renumber."""
    if not g.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) absent, cannot contract")
    survivors = [w for w in g.vertices() if w != v]
    remap = {old: i + 1 for i, old in enumerate(survivors)}
    edge_set = set()
    for a, b in g.edges():
        if v in (a, b):
            other = b if a == v else a
            if other != u:
                a, b = u, other
            else:
                continue  # the contracted edge itself
        na, nb = remap[a], remap[b]
        edge_set.add((min(na, nb), max(na, nb)))
    remap_full = dict(remap)
    remap_full[v] = remap[u]
    return ContractionResult(Graph.from_edges(g.n - 1, sorted(edge_set)), remap_full)


def to_networkx(g: Graph) -> "nx.Graph":
    ng = nx.Graph()
    ng.add_nodes_from(g.vertices())
    ng.add_edges_from(g.edges())
    return ng


def block_decomposition(g: Graph) -> BlockDecomposition:
    """Standard biconnected-component decomposition (bridges count as blocks)."""
    if not is_connected(g):
        raise GraphError("block decomposition requires a connected graph")
    ng = to_networkx(g)
    blocks = [frozenset(b) for b in nx.biconnected_components(ng)]
    if not blocks:  # single vertex, no edges
        blocks = [frozenset(g.vertices())]
    blocks.sort(key=lambda b: (min(b), len(b), sorted(b)))
    cuts = frozenset(nx.articulation_points(ng))
    return BlockDecomposition(tuple(blocks), cuts)


def conflict_graph(g: Graph) -> Graph:
    """Graph joining vertex pairs with at least two common neighbors.

    Any rainbow vertex-disconnection coloring must be proper on this graph,
    which is what makes it a useful lower-bound device.
    """
    if g.n < 2:
        raise GraphError("conflict graph needs n >= 2")
    if not is_connected(g):
        raise GraphError("conflict graph requires a connected graph")
    edges = [
        (u, v)
        for u in g.vertices()
        for v in range(u + 1, g.n + 1)
        if len(g.adj[u] & g.adj[v]) >= 2
    ]
    return Graph.from_edges(g.n, edges)
