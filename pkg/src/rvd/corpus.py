"""Test-corpus machinery: exhaustive non-isomorphic graph enumeration by
canonical augmentation, plus seeded random generators for the law checks."""
from __future__ import annotations

import functools
import random
from itertools import combinations

from .graph import Graph, is_connected
from .recognize import is_k4_minor_free


# ---------------------------------------------------------------------------
# canonical forms (individualization-refinement, exact for desk-scale sizes)

def _refine(adj: list[set[int]], cells: list[list[int]]) -> list[list[int]]:
    while True:
        index = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                index[v] = ci
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {}
            for v in cell:
                key = tuple(sorted(index[w] for w in adj[v]))
                sig.setdefault(key, []).append(v)
            parts = [sig[k] for k in sorted(sig)]
            if len(parts) > 1:
                changed = True
            new_cells.extend(parts)
        cells = new_cells
        if not changed:
            return cells


def _code(adj: list[set[int]], order: list[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    code = 0
    n = len(order)
    for v in order:
        for w in adj[v]:
            i, j = pos[v], pos[w]
            if i < j:
                code |= 1 << (i * n + j)
    return code


def canonical_form(g: Graph) -> tuple[int, int]:
    """Isomorphism-invariant key: (n, minimum adjacency code over all
    refinement-respecting orders)."""
    n = g.n
    adj = [set() for _ in range(n)]
    for u, v in g.edges():
        adj[u - 1].add(v - 1)
        adj[v - 1].add(u - 1)
    start = {}
    for v in range(n):
        start.setdefault(len(adj[v]), []).append(v)
    cells = _refine(adj, [start[k] for k in sorted(start)])
    best: list[int | None] = [None]

    def search(cells: list[list[int]]) -> None:
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            code = _code(adj, [c[0] for c in cells])
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        cell = cells[target]
        for v in cell:
            rest = [w for w in cell if w != v]
            new_cells = cells[:target] + [[v], rest] + cells[target + 1:]
            search(_refine(adj, new_cells))

    search(cells)
    return n, best[0]


# ---------------------------------------------------------------------------
# exhaustive enumeration by vertex augmentation

def _augment(g: Graph, subset: tuple[int, ...]) -> Graph:
    n = g.n + 1
    edges = g.edges() + [(v, n) for v in subset]
    return Graph.from_edges(n, edges)


def _levels(max_n: int, keep, attach_sizes) -> list[list[Graph]]:
    levels: list[list[Graph]] = [[Graph.from_edges(1, [])]]
    for n in range(2, max_n + 1):
        seen: dict[tuple[int, int], Graph] = {}
        for g in levels[-1]:
            pool = list(g.vertices())
            for size in attach_sizes(n - 1):
                for subset in combinations(pool, size):
                    cand = _augment(g, subset)
                    if not keep(cand):
                        continue
                    key = canonical_form(cand)
                    if key not in seen:
                        seen[key] = cand
        levels.append([seen[k] for k in sorted(seen)])
    return levels


@functools.lru_cache(maxsize=None)
def connected_graphs_upto(max_n: int) -> tuple[tuple[Graph, ...], ...]:
    """All non-isomorphic connected graphs with 1..max_n vertices."""
    lv = _levels(max_n, keep=lambda g: True, attach_sizes=lambda k: range(1, k + 1))
    return tuple(tuple(level) for level in lv)


@functools.lru_cache(maxsize=None)
def connected_k4mf_graphs_upto(max_n: int) -> tuple[tuple[Graph, ...], ...]:
    """All non-isomorphic connected K4-minor-free graphs with 1..max_n
    vertices (the class is minor-closed, so augmentation stays complete)."""
    lv = _levels(
        max_n, keep=is_k4_minor_free, attach_sizes=lambda k: range(1, k + 1)
    )
    return tuple(tuple(level) for level in lv)


@functools.lru_cache(maxsize=None)
def trees_upto(max_n: int) -> tuple[tuple[Graph, ...], ...]:
    """All non-isomorphic trees with 1..max_n vertices (leaf augmentation)."""
    lv = _levels(max_n, keep=lambda g: True, attach_sizes=lambda k: (1,))
    return tuple(tuple(level) for level in lv)


# ---------------------------------------------------------------------------
# seeded random generators

def random_connected_graph(rng: random.Random, n: int, extra_edges: int | None = None) -> Graph:
    edges = {(min(i, p), max(i, p)) for i in range(2, n + 1) for p in [rng.randint(1, i - 1)]}
    if extra_edges is None:
        extra_edges = rng.randint(0, max(1, n))
    for _ in range(extra_edges):
        u = rng.randint(1, n)
        v = rng.randint(1, n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(edges))


def random_connected_with_cut_vertex(rng: random.Random, n: int) -> Graph:
    from .graph import block_decomposition

    while True:
        g = random_connected_graph(rng, n, extra_edges=rng.randint(0, n // 2))
        if block_decomposition(g).cut_vertices:
            return g


def random_two_connected_with_adjacent_two_vertices(rng: random.Random, n: int) -> Graph:
    """Ear-decomposition growth; long ears supply the adjacent 2-vertices."""
    assert n >= 4
    while True:
        cycle_len = rng.randint(3, max(3, n - 2))
        edges = {(i, i % cycle_len + 1) for i in range(1, cycle_len + 1)}
        edges = {(min(a, b), max(a, b)) for a, b in edges}
        count = cycle_len
        while count < n:
            a = rng.randint(1, count)
            b = rng.randint(1, count)
            if a == b:
                continue
            ear_len = min(rng.randint(1, 3), n - count)
            prev = a
            for _ in range(ear_len):
                count += 1
                edges.add((min(prev, count), max(prev, count)))
                prev = count
            edges.add((min(prev, b), max(prev, b)))
        g = Graph.from_edges(n, sorted(edges))
        if not is_connected(g):
            continue
        from .graph import block_decomposition

        if block_decomposition(g).cut_vertices:
            continue
        has_pair = any(
            g.degree(u) == 2 and any(g.degree(w) == 2 for w in g.adj[u])
            for u in g.vertices()
        )
        if has_pair:
            return g


def random_coloring(rng: random.Random, n: int, max_colors: int) -> tuple[int, ...]:
    return tuple(rng.randint(1, max_colors) for _ in range(n))
