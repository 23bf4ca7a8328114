"""Brute-force oracles. Deliberately naive and independent of the production
search paths; they exist to cross-check everything else at desk scale."""
from __future__ import annotations

import itertools

from .graph import Graph, VertexColoring, reachable_mask


_NAIVE_CAP = 14


def naive_pair_has_cut(g: Graph, c: VertexColoring, x: int, y: int) -> bool:
    """Enumerate every subset of V minus {x, y} and test the definition."""
    adjacent = g.has_edge(x, y)
    masks = list(g.masks)
    if adjacent:
        masks[x] &= ~(1 << y)
        masks[y] &= ~(1 << x)
    others = [v for v in g.vertices() if v not in (x, y)]
    for r in range(len(others) + 1):
        for sub in itertools.combinations(others, r):
            blocked = 0
            for v in sub:
                blocked |= 1 << v
            if reachable_mask(masks, x, blocked) >> y & 1:
                continue
            cols = [c.of(v) for v in sub]
            if adjacent:
                if len(set(cols + [c.of(x)])) == r + 1 or len(set(cols + [c.of(y)])) == r + 1:
                    return True
            else:
                if len(set(cols)) == r:
                    return True
    return False


def naive_verify(g: Graph, c: VertexColoring) -> tuple[bool, tuple[int, int] | None]:
    if g.n > _NAIVE_CAP:
        raise ValueError(f"naive verifier capped at n <= {_NAIVE_CAP}")
    for x in g.vertices():
        for y in range(x + 1, g.n + 1):
            if not naive_pair_has_cut(g, c, x, y):
                return False, (x, y)
    return True, None


def naive_rvd(g: Graph) -> int:
    """rvd by sheer enumeration of all k^n colorings, smallest feasible k."""
    if g.n > 6:
        raise ValueError("naive rvd oracle capped at n <= 6")
    for k in range(1, g.n + 1):
        for assignment in itertools.product(range(1, k + 1), repeat=g.n):
            if len(set(assignment)) != k:
                continue
            ok, _ = naive_verify(g, VertexColoring(assignment))
            if ok:
                return k
    raise AssertionError("all-distinct coloring must verify")  # pragma: no cover


def _restricted_growth_partitions(items: list[int], parts: int):
    """All partitions of items into exactly `parts` nonempty blocks."""
    n = len(items)
    if parts > n:
        return
    assign = [0] * n

    def rec(i: int, used: int):
        if i == n:
            if used == parts:
                blocks: list[list[int]] = [[] for _ in range(parts)]
                for idx, b in enumerate(assign):
                    blocks[b].append(items[idx])
                yield [tuple(b) for b in blocks]
            return
        limit = min(used + 1, parts)
        for b in range(limit):
            assign[i] = b
            if n - i - 1 + max(used, b + 1) >= parts:
                yield from rec(i + 1, max(used, b + 1))

    yield from rec(0, 0)


def has_k4_minor_bruteforce(g: Graph) -> bool:
    """Four disjoint connected branch sets, pairwise joined by an edge."""
    if g.n > 9:
        raise ValueError("brute-force minor oracle capped at n <= 9")
    if g.n < 4:
        return False
    verts = list(g.vertices())
    masks = g.masks

    def connected_set(vs: tuple[int, ...]) -> bool:
        if len(vs) == 1:
            return True
        target = 0
        for v in vs:
            target |= 1 << v
        reach = reachable_mask(masks, vs[0], ~target)
        return reach & target == target

    def touching(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        bmask = 0
        for v in b:
            bmask |= 1 << v
        return any(masks[v] & bmask for v in a)

    for size in range(4, g.n + 1):
        for support in itertools.combinations(verts, size):
            for parts in _restricted_growth_partitions(list(support), 4):
                if not all(connected_set(p) for p in parts):
                    continue
                if all(
                    touching(parts[i], parts[j])
                    for i in range(4)
                    for j in range(i + 1, 4)
                ):
                    return True
    return False
