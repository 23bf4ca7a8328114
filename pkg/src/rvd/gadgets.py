"""Reductions from proper coloring: bipartite and split gadget builders,
k-fold replicated instances, the coloring translations in both directions,
and desk-scale equivalence checks."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, VertexColoring, GraphError, conflict_graph
from .verify import verify_coloring
from .exact import (
    DeskScaleError,
    chromatic_number,
    independence_number,
    kfold_chromatic_number,
    rvd_exact,
)


@dataclass(frozen=True)
class Role:
    kind: str  # "original" | "s" | "t"
    source: tuple[int, ...]  # (vertex,) for originals, (u, v) for edge vertices
    index: int  # copy number for originals, 1..3 for s, 1..2 for t

    def __str__(self) -> str:
        if self.kind == "original":
            return f"original {self.source[0]} {self.index}"
        u, v = self.source
        return f"{self.kind} {u}-{v} {self.index}"


@dataclass(frozen=True)
class GadgetResult:
    graph: Graph
    kind: str  # "bipartite" | "split"
    replication: int
    role_map: dict[int, Role]
    source_edge_count: int

    def vertices_with_role(self, kind: str) -> list[int]:
        return sorted(v for v, r in self.role_map.items() if r.kind == kind)

    def original_copies(self, v: int) -> list[int]:
        return sorted(
            g for g, r in self.role_map.items()
            if r.kind == "original" and r.source[0] == v
        )


def _build_gadget(g: Graph, kind: str, k: int) -> GadgetResult:
    if g.edge_count < 1:
        raise GraphError("gadget construction needs at least one edge")
    if k < 1:
        raise GraphError("replication factor must be positive")
    edges_src = g.edges()  # already sorted lexicographically
    m = len(edges_src)
    n = g.n
    s_per_edge = 2 if kind == "bipartite" else 3

    role_map: dict[int, Role] = {}
    # originals: copy j of source vertex v
    for j in range(1, k + 1):
        for v in g.vertices():
            role_map[(j - 1) * n + v] = Role("original", (v,), j)
    s_base = k * n
    for i, (u, v) in enumerate(edges_src):
        for idx in range(1, s_per_edge + 1):
            role_map[s_base + s_per_edge * i + idx] = Role("s", (u, v), idx)
    t_base = s_base + s_per_edge * m
    if kind == "bipartite":
        for i, (u, v) in enumerate(edges_src):
            for idx in range(1, 3):
                role_map[t_base + 2 * i + idx] = Role("t", (u, v), idx)
        total = t_base + 2 * m
    else:
        total = t_base

    def copy_id(v: int, j: int) -> int:
        return (j - 1) * n + v

    def s_id(i: int, idx: int) -> int:
        return s_base + s_per_edge * i + idx

    out_edges: list[tuple[int, int]] = []
    for i, (u, v) in enumerate(edges_src):
        for j in range(1, k + 1):
            for idx in range(1, s_per_edge + 1):
                out_edges.append((copy_id(u, j), s_id(i, idx)))
                out_edges.append((copy_id(v, j), s_id(i, idx)))
    s_all = [s_id(i, idx) for i in range(m) for idx in range(1, s_per_edge + 1)]
    if kind == "bipartite":
        t_all = [t_base + 2 * i + idx for i in range(m) for idx in range(1, 3)]
        out_edges.extend((s, t) for s in s_all for t in t_all)
    else:
        out_edges.extend(
            (s_all[a], s_all[b])
            for a in range(len(s_all))
            for b in range(a + 1, len(s_all))
        )
    gadget = Graph.from_edges(total, sorted((min(a, b), max(a, b)) for a, b in out_edges))
    return GadgetResult(gadget, kind, k, role_map, m)


def bipartite_gadget(g: Graph) -> GadgetResult:
    """Per source edge: two subdivision vertices wired to both endpoints, plus
    two mirror vertices; the subdivision side is completely joined to the
    mirror side, which keeps the gadget bipartite."""
    return _build_gadget(g, "bipartite", 1)


def split_gadget(g: Graph) -> GadgetResult:
    """Per source edge: three subdivision vertices wired to both endpoints;
    all subdivision vertices form one clique, the originals stay independent."""
    return _build_gadget(g, "split", 1)


def replicated_gadget(g: Graph, k: int, kind: str) -> GadgetResult:
    """The k-fold construction: k copies of the original vertex set share the
    per-edge gadget vertices."""
    if kind not in ("bipartite", "split"):
        raise GraphError(f"unknown gadget kind {kind!r}")
    return _build_gadget(g, kind, k)


# ---------------------------------------------------------------------------
# coloring translations

def _is_proper(g: Graph, c: VertexColoring) -> bool:
    return all(c.of(u) != c.of(v) for u, v in g.edges())


def forward_coloring(g: Graph, c: VertexColoring, gadget: GadgetResult) -> VertexColoring:
    """Turn a proper coloring of the source into an accepted coloring of the
    gadget: copy j of the originals uses its own shifted palette block, and
    the gadget vertices get fresh rainbow colors (mirrors repeat their
    subdivision partner, which keeps every neighborhood rainbow)."""
    if c.n != g.n:
        raise GraphError("coloring does not match the source graph")
    if not _is_proper(g, c):
        raise GraphError("forward translation needs a proper source coloring")
    base = c.palette_size
    palette = {col: i + 1 for i, col in enumerate(sorted(set(c.colors)))}
    k = gadget.replication
    mapping: dict[int, int] = {}
    for v, role in gadget.role_map.items():
        if role.kind == "original":
            mapping[v] = (role.index - 1) * base + palette[c.of(role.source[0])]
    fresh = base * k
    s_vertices = gadget.vertices_with_role("s")
    s_color: dict[int, int] = {}
    for v in s_vertices:
        fresh += 1
        mapping[v] = fresh
        s_color[(gadget.role_map[v].source, gadget.role_map[v].index)] = fresh
    for v in gadget.vertices_with_role("t"):
        role = gadget.role_map[v]
        mapping[v] = s_color[(role.source, role.index)]
    out = VertexColoring.from_map(mapping, gadget.graph.n)
    report = verify_coloring(gadget.graph, out)
    if not report.verdict:
        raise AssertionError(f"forward coloring rejected at pair {report.failing_pair}")
    return out


def backward_coloring(gadget: GadgetResult, c: VertexColoring):
    """Restrict an accepted gadget coloring to the originals.

    Unreplicated gadgets yield a proper coloring of the source; replicated
    ones yield the k-fold assignment (vertex -> frozenset of k colors)."""
    report = verify_coloring(gadget.graph, c)
    if not report.verdict:
        raise GraphError(f"gadget coloring rejected at pair {report.failing_pair}")
    n = max(r.source[0] for r in gadget.role_map.values() if r.kind == "original")
    if gadget.replication == 1:
        mapping = {
            role.source[0]: c.of(v)
            for v, role in gadget.role_map.items()
            if role.kind == "original"
        }
        return VertexColoring.from_map(mapping, n)
    out: dict[int, frozenset[int]] = {}
    for v in range(1, n + 1):
        cols = frozenset(c.of(copy) for copy in gadget.original_copies(v))
        if len(cols) != gadget.replication:
            raise AssertionError(f"copies of vertex {v} repeat a color")
        out[v] = cols
    return out


# ---------------------------------------------------------------------------
# equivalence checks

def roundtrip_check(g: Graph, k: int, kind: str, cap: int = 16) -> bool:
    """Decide [chi(G) <= k] == [rvd(gadget) <= k + c*m] with both sides
    computed independently."""
    gadget = _build_gadget(g, kind, 1)
    if gadget.graph.n > cap:
        raise DeskScaleError(f"gadget has {gadget.graph.n} vertices, cap {cap}")
    c_per_edge = 2 if kind == "bipartite" else 3
    lhs = chromatic_number(g) <= k
    rhs = rvd_exact(gadget.graph, cap=cap).value <= k + c_per_edge * gadget.source_edge_count
    return lhs == rhs


@dataclass(frozen=True)
class ChainReport:
    kind: str
    k: int
    alpha_term: Fraction  # k*n/alpha + c*m
    kfold_term: int  # chi_k + c*m
    rvd_lower: int  # conflict-graph chromatic number of the gadget
    rvd_upper: int  # verified forward coloring palette: k*chi + c*m
    rvd_exact: int | None
    holds: bool
    tight: bool

    def terms(self) -> list[tuple[str, str]]:
        out = [
            ("kn/alpha+cm", str(self.alpha_term)),
            ("chik+cm", str(self.kfold_term)),
            ("rvd_lower", str(self.rvd_lower)),
            ("rvd_upper", str(self.rvd_upper)),
        ]
        if self.rvd_exact is not None:
            out.append(("rvd_exact", str(self.rvd_exact)))
        return out


def chain_check(g: Graph, k: int, kind: str, exact_cap: int = 12) -> ChainReport:
    """Evaluate the replicated-gadget inequality chain at desk scale.

    Computes k*n/alpha + c*m <= chi_k + c*m <= rvd(H) <= k*chi + c*m with
    rvd(H) solved exactly when the gadget fits the cap, otherwise bracketed
    by the conflict-graph lower bound and the verified forward coloring."""
    gadget = _build_gadget(g, kind, k)
    c_per_edge = 2 if kind == "bipartite" else 3
    cm = c_per_edge * gadget.source_edge_count
    alpha = independence_number(g)
    chi = chromatic_number(g)
    chik = kfold_chromatic_number(g, k)
    alpha_term = Fraction(k * g.n, alpha) + cm
    kfold_term = chik + cm
    lower = chromatic_number(conflict_graph(gadget.graph))
    forward = forward_coloring(g, _optimal_proper_coloring(g), gadget)
    upper = forward.palette_size
    assert upper == k * chi + cm
    exact_value: int | None = None
    if gadget.graph.n <= exact_cap:
        exact_value = rvd_exact(gadget.graph, cap=exact_cap).value
    holds = alpha_term <= kfold_term <= upper and lower <= upper
    if exact_value is not None:
        holds = holds and kfold_term <= exact_value <= upper and lower <= exact_value
        tight = alpha_term == kfold_term == exact_value == upper
    else:
        tight = alpha_term == kfold_term == lower == upper
    return ChainReport(
        kind, k, alpha_term, kfold_term, lower, upper, exact_value, holds, tight
    )


def _optimal_proper_coloring(g: Graph) -> VertexColoring:
    """Smallest proper coloring by exhaustive first-fit over k = chi."""
    k = chromatic_number(g)
    assign = [0] * (g.n + 1)

    def rec(v: int, used: int):
        if v > g.n:
            return dict(enumerate(assign))
        for col in range(1, min(used + 1, k) + 1):
            if any(assign[w] == col for w in g.adj[v] if w < v):
                continue
            assign[v] = col
            res = rec(v + 1, max(used, col))
            if res is not None:
                return res
            assign[v] = 0
        return None

    res = rec(1, 0)
    assert res is not None
    return VertexColoring.from_map({v: c for v, c in res.items() if v >= 1}, g.n)
