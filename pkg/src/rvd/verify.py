"""Certification that a colored graph is rainbow vertex-disconnected.

Every vertex pair needs a rainbow vertex-cut witness: for a nonadjacent pair
a rainbow set S separating them, for an adjacent pair a set S separating them
in the graph minus that edge such that S plus one endpoint is rainbow.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import (
    Graph,
    VertexColoring,
    ColoringError,
    GraphError,
    block_decomposition,
    is_connected,
    reachable_mask,
)


@dataclass(frozen=True)
class CutWitness:
    """Per-pair certificate: the cut plus which endpoint (if any) joins the
    rainbow set."""

    x: int
    y: int
    adjacent: bool
    cut: frozenset[int]
    rainbow_side: str  # "none" | "x" | "y"

    def __post_init__(self) -> None:
        if self.adjacent and self.rainbow_side not in ("x", "y"):
            raise ValueError("adjacent witness must name a rainbow side")
        if not self.adjacent and self.rainbow_side != "none":
            raise ValueError("nonadjacent witness carries no rainbow side")


@dataclass(frozen=True)
class VerificationReport:
    verdict: bool
    witnesses: dict[tuple[int, int], CutWitness] | None
    failing_pair: tuple[int, int] | None


def is_rainbow(coloring: VertexColoring, verts) -> bool:
    seen = 0
    for v in verts:
        bit = 1 << coloring.of(v)
        if seen & bit:
            return False
        seen |= bit
    return True


def separates(g: Graph, cut, x: int, y: int, drop_edge_xy: bool = False) -> bool:
    """Whether x and y land in different components once cut is removed
    (and the edge xy deleted first, when requested)."""
    cut = frozenset(cut)
    if x in cut or y in cut:
        raise GraphError("cut must avoid the endpoints")
    if drop_edge_xy and not g.has_edge(x, y):
        raise GraphError(f"edge ({x}, {y}) absent, nothing to drop")
    blocked = 0
    for v in cut:
        g._check_vertex(v)
        blocked |= 1 << v
    masks = g.masks
    if drop_edge_xy:
        masks = list(masks)
        masks[x] &= ~(1 << y)
        masks[y] &= ~(1 << x)
    return not reachable_mask(masks, x, blocked) >> y & 1


def _validates(g: Graph, c: VertexColoring, w: CutWitness) -> bool:
    if not separates(g, w.cut, w.x, w.y, drop_edge_xy=w.adjacent):
        return False
    if w.adjacent:
        endpoint = w.x if w.rainbow_side == "x" else w.y
        return is_rainbow(c, list(w.cut) + [endpoint])
    return is_rainbow(c, w.cut)


def validate_witness(g: Graph, c: VertexColoring, w: CutWitness) -> bool:
    """Re-check a witness from first principles (separation + rainbowness only)."""
    if w.x == w.y or not (1 <= w.x <= g.n) or not (1 <= w.y <= g.n):
        return False
    if w.adjacent != g.has_edge(w.x, w.y):
        return False
    if w.x in w.cut or w.y in w.cut:
        return False
    return _validates(g, c, w)


# ---------------------------------------------------------------------------
# canonical search (the public find_rainbow_cut contract)

def _class_combinations(classes: list[list[int]], size: int):
    """All ways to pick `size` vertices, at most one per color class."""
    for chosen in itertools.combinations(range(len(classes)), size):
        for combo in itertools.product(*(classes[i] for i in chosen)):
            yield combo


def find_rainbow_cut(
    g: Graph, c: VertexColoring, x: int, y: int, banned: frozenset[int] = frozenset()
) -> CutWitness | None:
    """Smallest-first deterministic search for an x-y rainbow vertex-cut.

    Candidate sets take at most one vertex per color class of V minus {x, y}
    (for adjacent pairs the chosen endpoint's color class is excluded too);
    the first separating set in that order is returned.  `banned` removes
    vertices from the candidate pool, used by callers probing for witnesses
    that avoid a specific vertex.
    """
    if x == y:
        raise GraphError("need two distinct vertices")
    g._check_vertex(x)
    g._check_vertex(y)
    if c.n != g.n:
        raise ColoringError("coloring does not match the graph")
    adjacent = g.has_edge(x, y)
    masks = list(g.masks)
    if adjacent:
        masks[x] &= ~(1 << y)
        masks[y] &= ~(1 << x)
    pool = [v for v in g.vertices() if v not in (x, y) and v not in banned]

    by_color: dict[int, list[int]] = {}
    for v in pool:
        by_color.setdefault(c.of(v), []).append(v)

    if adjacent:
        sides = (("x", x), ("y", y))
    else:
        sides = (("none", -1),)

    ybit = 1 << y
    for side_name, endpoint in sides:
        if side_name == "none":
            classes = [by_color[col] for col in sorted(by_color)]
        else:
            classes = [by_color[col] for col in sorted(by_color) if col != c.of(endpoint)]
        # if removing every candidate fails to separate, no subset can
        all_mask = 0
        for cls in classes:
            for v in cls:
                all_mask |= 1 << v
        if reachable_mask(masks, x, all_mask) & ybit:
            continue
        for size in range(0, len(classes) + 1):
            for combo in _class_combinations(classes, size):
                blocked = 0
                for v in combo:
                    blocked |= 1 << v
                if not reachable_mask(masks, x, blocked) & ybit:
                    return CutWitness(x, y, adjacent, frozenset(combo), side_name)
    return None


def _pruned_class_search(
    masks: list[int], x: int, y: int, classes: list[list[int]]
) -> tuple[int, ...] | None:
    """Complete search for a separator with at most one vertex per class.

    Depth-first over classes (skip it, or take one member), pruning any
    subtree where even taking every remaining candidate leaves x and y
    connected.  Returns the chosen vertices or None.
    """
    ybit = 1 << y
    k = len(classes)
    suffix = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        m = suffix[i + 1]
        for v in classes[i]:
            m |= 1 << v
        suffix[i] = m

    def rec(idx: int, blocked: int, chosen: tuple[int, ...]):
        if not reachable_mask(masks, x, blocked) & ybit:
            return chosen
        if idx == k:
            return None
        if reachable_mask(masks, x, blocked | suffix[idx]) & ybit:
            return None
        res = rec(idx + 1, blocked, chosen)
        if res is not None:
            return res
        for v in classes[idx]:
            res = rec(idx + 1, blocked | (1 << v), chosen + (v,))
            if res is not None:
                return res
        return None

    return rec(0, 0, ())


def _search_witness_complete(
    g: Graph, c: VertexColoring, x: int, y: int, banned: frozenset[int]
) -> CutWitness | None:
    """Complete (but order-free) witness search used by the verifier engine."""
    adjacent = g.has_edge(x, y)
    masks = list(g.masks)
    if adjacent:
        masks[x] &= ~(1 << y)
        masks[y] &= ~(1 << x)
    pool = [v for v in g.vertices() if v not in (x, y) and v not in banned]
    by_color: dict[int, list[int]] = {}
    for v in pool:
        by_color.setdefault(c.of(v), []).append(v)
    sides = (("x", x), ("y", y)) if adjacent else (("none", -1),)
    for side_name, endpoint in sides:
        if side_name == "none":
            classes = [by_color[col] for col in sorted(by_color)]
        else:
            classes = [by_color[col] for col in sorted(by_color) if col != c.of(endpoint)]
        combo = _pruned_class_search(masks, x, y, classes)
        if combo is not None:
            return CutWitness(x, y, adjacent, frozenset(combo), side_name)
    return None


def _witness_colors_ok(c: VertexColoring, w: CutWitness) -> CutWitness | None:
    """Recheck only the color side of a witness (separation is a property of
    the graph alone); adjacent witnesses may come back with the side flipped."""
    if not is_rainbow(c, w.cut):
        return None
    if not w.adjacent:
        return w
    colors = {c.of(v) for v in w.cut}
    if c.of(w.x) not in colors:
        return w if w.rainbow_side == "x" else CutWitness(w.x, w.y, True, w.cut, "x")
    if c.of(w.y) not in colors:
        return w if w.rainbow_side == "y" else CutWitness(w.x, w.y, True, w.cut, "y")
    return None


# ---------------------------------------------------------------------------
# fast verification engine
#
# verify_coloring checks hundreds of pairs on graphs up to a few dozen
# vertices, so it tries cheap sufficient witnesses before falling back to the
# complete class enumeration.  Soundness: every returned witness separates by
# construction.  Completeness: the fallback enumerates every rainbow subset of
# the pair's block, and a rainbow cut exists iff one exists inside the block.

class _BlockInfo:
    def __init__(self, g: Graph):
        decomp = block_decomposition(g)
        self.blocks = decomp.blocks
        self.cuts = decomp.cut_vertices
        self.vertex_blocks: dict[int, list[int]] = {v: [] for v in g.vertices()}
        for i, b in enumerate(decomp.blocks):
            for v in b:
                self.vertex_blocks[v].append(i)
        # block-cut tree for cross-block separator lookup
        self._tree: dict[object, list[object]] = {}
        for i, b in enumerate(decomp.blocks):
            self._tree.setdefault(("b", i), [])
            for v in b & decomp.cut_vertices:
                self._tree[("b", i)].append(("c", v))
                self._tree.setdefault(("c", v), []).append(("b", i))

    def common_block(self, x: int, y: int) -> int | None:
        for i in self.vertex_blocks[x]:
            if i in self.vertex_blocks[y]:
                return i
        return None

    def separating_cut_vertex(self, x: int, y: int) -> int:
        """A cut vertex on the block-tree path between x and y (they must not
        share a block)."""
        start = ("b", self.vertex_blocks[x][0]) if x not in self.cuts else ("c", x)
        goal = ("b", self.vertex_blocks[y][0]) if y not in self.cuts else ("c", y)
        prev: dict[object, object] = {start: start}
        frontier = [start]
        while frontier:
            nxt = []
            for node in frontier:
                for nb in self._tree[node]:
                    if nb not in prev:
                        prev[nb] = node
                        nxt.append(nb)
            if goal in prev:
                break
            frontier = nxt
        node = goal
        while node != start:
            kind, val = node
            if kind == "c" and val not in (x, y):
                return val
            node = prev[node]
        raise GraphError("no separating cut vertex found")  # pragma: no cover


def _boundary_cut(g: Graph, x: int, y: int, adjacent: bool) -> list[int]:
    """The minimal x-y separator inside N(x): neighbors of x with a path to y
    avoiding x and the rest of N(x)."""
    masks = g.masks
    if adjacent:
        masks = list(masks)
        masks[x] &= ~(1 << y)
        masks[y] &= ~(1 << x)
    nx_mask = masks[x]
    blocked = nx_mask | (1 << x)
    reach_y = reachable_mask(masks, y, blocked)
    out = []
    m = nx_mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        if v != y and (masks[v] & reach_y or reach_y >> v & 1):
            out.append(v)
    return out


def _witness_from_set(
    g: Graph, c: VertexColoring, x: int, y: int, cut, adjacent: bool
) -> CutWitness | None:
    cut = [v for v in cut if v not in (x, y)]
    if not is_rainbow(c, cut):
        return None
    if not adjacent:
        w = CutWitness(x, y, False, frozenset(cut), "none")
        return w if separates(g, cut, x, y) else None
    if not separates(g, cut, x, y, drop_edge_xy=True):
        return None
    colors = {c.of(v) for v in cut}
    if c.of(x) not in colors:
        return CutWitness(x, y, True, frozenset(cut), "x")
    if c.of(y) not in colors:
        return CutWitness(x, y, True, frozenset(cut), "y")
    return None


def _find_witness(
    g: Graph, c: VertexColoring, x: int, y: int, info: _BlockInfo | None
) -> CutWitness | None:
    adjacent = g.has_edge(x, y)

    if info is not None and not adjacent and info.common_block(x, y) is None:
        z = info.separating_cut_vertex(x, y)
        return CutWitness(x, y, False, frozenset([z]), "none")

    # neighborhood witnesses: removing N(x) always isolates x
    w = _witness_from_set(g, c, x, y, g.adj[x], adjacent)
    if w is not None:
        return w
    w = _witness_from_set(g, c, x, y, g.adj[y], adjacent)
    if w is not None:
        return w
    # minimal separator hugging x (or y); useful when N(x) repeats colors
    w = _witness_from_set(g, c, x, y, _boundary_cut(g, x, y, adjacent), adjacent)
    if w is not None:
        return w
    w = _witness_from_set(g, c, y, x, _boundary_cut(g, y, x, adjacent), adjacent)
    if w is not None:
        return CutWitness(x, y, w.adjacent, w.cut, {"x": "y", "y": "x", "none": "none"}[w.rainbow_side])

    # complete fallback, restricted to the shared block (every x-y path
    # stays inside it, so cuts outside it are dead weight)
    banned: frozenset[int] = frozenset()
    if info is not None:
        shared = info.common_block(x, y)
        if shared is not None:
            banned = frozenset(v for v in g.vertices() if v not in info.blocks[shared])
    return _search_witness_complete(g, c, x, y, banned)


def verify_coloring(g: Graph, c: VertexColoring) -> VerificationReport:
    """Full certification: a witness for every pair, or the lexicographically
    smallest failing pair."""
    if c.n != g.n:
        raise ColoringError("coloring does not match the graph")
    if g.n < 2:
        raise GraphError("verification needs n >= 2")
    if not is_connected(g):
        raise GraphError("verification requires a connected graph")
    info = _BlockInfo(g) if g.n >= 3 else None
    witnesses: dict[tuple[int, int], CutWitness] = {}
    for x in g.vertices():
        for y in range(x + 1, g.n + 1):
            w = _find_witness(g, c, x, y, info)
            if w is None:
                return VerificationReport(False, None, (x, y))
            witnesses[(x, y)] = w
    return VerificationReport(True, witnesses, None)


def exists_rainbow_cut(g: Graph, c: VertexColoring, x: int, y: int) -> bool:
    """Existence-only variant used inside search loops."""
    info = _BlockInfo(g) if g.n >= 3 else None
    return _find_witness(g, c, x, y, info) is not None


def exists_rainbow_cut_avoiding(
    g: Graph, c: VertexColoring, x: int, y: int, banned: frozenset[int]
) -> bool:
    """Whether some rainbow cut for the pair avoids every banned vertex."""
    return _search_witness_complete(g, c, x, y, banned) is not None


class IncrementalVerifier:
    """Full verification for one fixed graph across many similar colorings.

    Cut witnesses survive recoloring as separators, so each pass revalidates
    the cached cut's rainbowness (no reachability work) and searches afresh
    only for pairs whose witness broke.
    """

    def __init__(self, g: Graph):
        if g.n < 2:
            raise GraphError("verification needs n >= 2")
        if not is_connected(g):
            raise GraphError("verification requires a connected graph")
        self.g = g
        self._info = _BlockInfo(g) if g.n >= 3 else None
        self._cache: dict[tuple[int, int], CutWitness] = {}

    def verify(self, c: VertexColoring) -> VerificationReport:
        if c.n != self.g.n:
            raise ColoringError("coloring does not match the graph")
        g = self.g
        witnesses: dict[tuple[int, int], CutWitness] = {}
        for x in g.vertices():
            for y in range(x + 1, g.n + 1):
                cached = self._cache.get((x, y))
                if cached is not None:
                    kept = _witness_colors_ok(c, cached)
                    if kept is not None:
                        witnesses[(x, y)] = kept
                        continue
                w = _find_witness(g, c, x, y, self._info)
                if w is None:
                    return VerificationReport(False, None, (x, y))
                witnesses[(x, y)] = w
                self._cache[(x, y)] = w
        return VerificationReport(True, witnesses, None)


_VERIFIER_CACHE: dict[Graph, IncrementalVerifier] = {}
_VERIFIER_CACHE_LIMIT = 64


def verify_coloring_cached(g: Graph, c: VertexColoring) -> VerificationReport:
    """verify_coloring backed by a small per-graph witness cache; used by
    callers that verify the same graph under a stream of related colorings."""
    verifier = _VERIFIER_CACHE.get(g)
    if verifier is None:
        verifier = IncrementalVerifier(g)
        if len(_VERIFIER_CACHE) >= _VERIFIER_CACHE_LIMIT:
            _VERIFIER_CACHE.pop(next(iter(_VERIFIER_CACHE)))
        _VERIFIER_CACHE[g] = verifier
    return verifier.verify(c)
