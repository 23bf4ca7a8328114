"""K4-minor-freeness decision and the structural configuration search that
drives the constructive colorer."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .graph import (
    Graph,
    GraphError,
    block_decomposition,
    connected_components,
    induced_subgraph,
    is_connected,
    t_set,
)


class StructureKind(enum.Enum):
    MIN_DEGREE_LEQ_ONE = "MinDegreeLeqOne"
    ADJACENT_TWO_VERTICES = "AdjacentTwoVertices"
    HUB_VERTEX = "HubVertex"


@dataclass(frozen=True)
class StructureLocator:
    """Which branch of the structure trichotomy applies, with its evidence."""

    kind: StructureKind
    low_degree_vertex: int | None = None
    adjacent_pair: tuple[int, int] | None = None
    hub: int | None = None
    hub_t_set: frozenset[int] | None = None
    hub_q_set: frozenset[int] | None = None
    t_pair_adjacent: bool | None = None
    claim1_satisfied: bool | None = None

    def __post_init__(self) -> None:
        populated = [
            self.low_degree_vertex is not None,
            self.adjacent_pair is not None,
            self.hub is not None,
        ]
        if sum(populated) != 1:
            raise ValueError("exactly one structure kind must be populated")


# ---------------------------------------------------------------------------
# K4-minor recognition

def _block_is_series_parallel(g: Graph, block: frozenset[int]) -> bool:
    """Degree-<=2 elimination on a copy of the block.

    Suppressing a degree-2 vertex is an edge contraction, so parallel edges
    merge on the spot and the working graph stays simple.  A block reduces to
    at most one edge iff it is series-parallel; a stuck remainder has minimum
    degree three and therefore contains a K4 minor.
    """
    verts = sorted(block)
    if len(verts) <= 2:
        return True
    adj: dict[int, set[int]] = {v: set() for v in verts}
    for v in verts:
        for w in g.adj[v]:
            if w in block:
                adj[v].add(w)

    queue = [v for v in verts if len(adj[v]) <= 2]
    while queue:
        v = queue.pop()
        if v not in adj or len(adj[v]) > 2:
            continue
        if len(adj) <= 2:
            break
        nbrs = sorted(adj[v])
        for w in nbrs:
            adj[w].discard(v)
        del adj[v]
        if len(nbrs) == 2:
            a, b = nbrs
            adj[a].add(b)
            adj[b].add(a)
        for w in nbrs:
            if w in adj and len(adj[w]) <= 2:
                queue.append(w)
    return len(adj) <= 2


def is_k4_minor_free(g: Graph) -> bool:
    """True iff the graph has no K4 minor (equivalently treewidth <= 2);
    decided block by block, since a K4 minor lives inside a single block."""
    for comp in connected_components(g):
        if len(comp) < 4:
            continue
        sub, _ = induced_subgraph(g, comp)
        decomp = block_decomposition(sub)
        for block in decomp.blocks:
            if not _block_is_series_parallel(sub, block):
                return False
    return True


# ---------------------------------------------------------------------------
# structure search

def _claim1_holds(g: Graph, t_pair: tuple[int, int], t_values: dict[int, int]) -> bool:
    a, b = t_pair
    if g.has_edge(a, b):
        return t_values[a] in (2, 3) or t_values[b] in (2, 3)
    return t_values[a] == 2 or t_values[b] == 2


def find_structure(g: Graph) -> StructureLocator:
    """Locate the configuration the constructive colorer dispatches on.

    Preference order: a degree-<=1 vertex, then an adjacent pair of
    2-vertices, then a hub u with deg >= 3 and t(u) <= 2 (preferring hubs
    whose T-pair satisfies the selection refinement); smallest ids break
    every tie.
    """
    if g.n < 2:
        raise GraphError("structure search needs n >= 2")
    if not is_connected(g):
        raise GraphError("structure search requires a connected graph")
    if not is_k4_minor_free(g):
        raise GraphError("graph is not K4-minor-free")

    for v in g.vertices():
        if g.degree(v) <= 1:
            return StructureLocator(StructureKind.MIN_DEGREE_LEQ_ONE, low_degree_vertex=v)

    for u in g.vertices():
        if g.degree(u) != 2:
            continue
        for v in sorted(g.adj[u]):
            if g.degree(v) == 2:
                return StructureLocator(
                    StructureKind.ADJACENT_TWO_VERTICES, adjacent_pair=(u, v)
                )

    t_values = {v: len(t_set(g, v)) for v in g.vertices() if g.degree(v) >= 3}
    hubs = [v for v, t in sorted(t_values.items()) if t <= 2]
    if not hubs:
        raise GraphError("structure trichotomy failed; input is not K4-minor-free")

    def locator_for(u: int, claim1: bool) -> StructureLocator:
        tset = t_set(g, u)
        pair_adjacent = None
        if len(tset) == 2:
            a, b = sorted(tset)
            pair_adjacent = g.has_edge(a, b)
        q = frozenset(z for z in g.adj[u] if g.degree(z) == 2)
        return StructureLocator(
            StructureKind.HUB_VERTEX,
            hub=u,
            hub_t_set=tset,
            hub_q_set=q,
            t_pair_adjacent=pair_adjacent,
            claim1_satisfied=claim1,
        )

    for u in hubs:
        tset = sorted(t_set(g, u))
        if len(tset) <= 1:
            return locator_for(u, True)  # special complete-bipartite shapes
        if _claim1_holds(g, (tset[0], tset[1]), t_values):
            return locator_for(u, True)
    return locator_for(hubs[0], False)


# ---------------------------------------------------------------------------
# series-parallel test corpus generator

def generate_sp_graph(seed: int, size_budget: int) -> Graph:
    """Random connected K4-minor-free graph with exactly size_budget vertices,
    deterministic in the seed.

    Grown from a single edge by operations that preserve the class: edge
    subdivision, a new 2-vertex across an existing edge, duplication of an
    existing 2-vertex, and pendant attachment.
    """
    if size_budget < 2:
        raise GraphError("size budget must be at least 2")
    rng = random.Random(seed)
    n = 2
    adj: dict[int, set[int]] = {1: {2}, 2: {1}}

    def add_vertex(nbrs: list[int]) -> None:
        nonlocal n
        n += 1
        adj[n] = set(nbrs)
        for w in nbrs:
            adj[w].add(n)

    def random_edge() -> tuple[int, int]:
        edges = [(u, v) for u in sorted(adj) for v in sorted(adj[u]) if u < v]
        return rng.choice(edges)

    while n < size_budget:
        op = rng.choices(
            ("subdivide", "parallel", "twin", "pendant"), weights=(3, 3, 2, 2)
        )[0]
        if op == "subdivide":
            u, v = random_edge()
            adj[u].discard(v)
            adj[v].discard(u)
            add_vertex([u, v])
        elif op == "parallel":
            u, v = random_edge()
            add_vertex([u, v])
        elif op == "twin":
            twos = [v for v in sorted(adj) if len(adj[v]) == 2]
            if not twos:
                continue
            z = rng.choice(twos)
            add_vertex(sorted(adj[z]))
        else:
            add_vertex([rng.choice(sorted(adj))])

    edges = [(u, v) for u in sorted(adj) for v in sorted(adj[u]) if u < v]
    return Graph.from_edges(n, edges)
