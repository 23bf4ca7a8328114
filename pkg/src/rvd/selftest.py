"""The acceptance suite: every headline claim checked at desk scale, each as
a callable criterion usable from pytest and from the CLI selftest command."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, VertexColoring, conflict_graph, contract_edge
from .verify import verify_coloring
from .exact import DEFAULT_CAP, bounds, chromatic_number, rvd_exact
from .recognize import generate_sp_graph, is_k4_minor_free
from .colorer import color_k4mf
from .gadgets import (
    bipartite_gadget,
    chain_check,
    replicated_gadget,
    roundtrip_check,
    split_gadget,
)
from .oracles import naive_verify
from .corpus import (
    connected_graphs_upto,
    connected_k4mf_graphs_upto,
    random_coloring,
    random_connected_graph,
    random_connected_with_cut_vertex,
    random_two_connected_with_adjacent_two_vertices,
    trees_upto,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number} [{self.name}]: {status} ({self.detail})"


def _cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def _complete_bipartite_2t(t: int) -> Graph:
    return Graph.from_edges(t + 2, [(h, l) for h in (1, 2) for l in range(3, t + 3)])


def _complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


K2 = _complete(2)
P3 = Graph.from_edges(3, [(1, 2), (2, 3)])
K3 = _complete(3)


def criterion_1_tree_law(witness_pool: list) -> CriterionResult:
    """rvd = 1 exactly for trees: all trees up to n=10, and the converse over
    the whole connected corpus up to n=7."""
    failures = []
    tree_count = 0
    for level in trees_upto(10)[1:]:
        for g in level:
            res = rvd_exact(g, cap=10)
            witness_pool.append((g, res.witness))
            tree_count += 1
            if res.value != 1:
                failures.append(f"tree n={g.n} gave {res.value}")
    nontrees = 0
    for level in connected_graphs_upto(7)[1:]:
        for g in level:
            if g.edge_count == g.n - 1:
                continue
            nontrees += 1
            res = rvd_exact(g, cap=9)
            witness_pool.append((g, res.witness))
            if res.value < 2:
                failures.append(f"non-tree {g.edges()} gave {res.value}")
    detail = f"{tree_count} trees, {nontrees} non-trees"
    if failures:
        detail += "; " + "; ".join(failures[:3])
    return CriterionResult(1, "tree-law", not failures, detail)


def criterion_2_cycle_law(witness_pool: list) -> CriterionResult:
    failures = []
    for n in range(3, 11):
        res = rvd_exact(_cycle(n), cap=10)
        witness_pool.append((_cycle(n), res.witness))
        if res.value != 2:
            failures.append(f"C_{n} gave {res.value}")
    return CriterionResult(2, "cycle-law", not failures, "C_3..C_10" + ("; " + "; ".join(failures) if failures else ""))


def criterion_3_sharpness(witness_pool: list) -> CriterionResult:
    failures = []
    for t in range(2, 7):
        g = _complete_bipartite_2t(t)
        res = rvd_exact(g, cap=10)
        witness_pool.append((g, res.witness))
        if res.value != t:
            failures.append(f"K_2_{t} gave {res.value}")
    return CriterionResult(3, "sharpness", not failures, "K_{2,2}..K_{2,6}" + ("; " + "; ".join(failures) if failures else ""))


def criterion_4_constructive_bound(seed: int) -> CriterionResult:
    failures = []
    small_fallbacks = 0
    count_small = 0
    for level in connected_k4mf_graphs_upto(8)[1:]:
        for g in level:
            if g.n < 2:
                continue
            count_small += 1
            coloring, trace = color_k4mf(g)
            if trace.fallback_count:
                small_fallbacks += 1
            if coloring.palette_size > max(g.max_degree(), 1):
                failures.append(f"palette blown on {g.edges()}")
            if not verify_coloring(g, coloring).verdict:
                failures.append(f"rejected on {g.edges()}")
    rng = random.Random(seed)
    for i in range(500):
        g = generate_sp_graph(seed=seed * 1000 + i, size_budget=rng.randint(2, 40))
        coloring, trace = color_k4mf(g)
        if coloring.palette_size > max(g.max_degree(), 1):
            failures.append(f"palette blown on seeded instance {i}")
        if not verify_coloring(g, coloring).verdict:
            failures.append(f"rejected on seeded instance {i}")
    passed = not failures and small_fallbacks == 0
    detail = f"{count_small} exhaustive graphs (fallbacks={small_fallbacks}), 500 seeded instances"
    if failures:
        detail += "; " + "; ".join(failures[:3])
    return CriterionResult(4, "constructive-delta-bound", passed, detail)


def criterion_5_block_law(seed: int, witness_pool: list) -> CriterionResult:
    rng = random.Random(seed + 5)
    failures = []
    for i in range(200):
        g = random_connected_with_cut_vertex(rng, rng.randint(4, 9))
        split = rvd_exact(g, cap=9, decompose=True)
        whole = rvd_exact(g, cap=9, decompose=False)
        witness_pool.append((g, split.witness))
        witness_pool.append((g, whole.witness))
        if split.value != whole.value:
            failures.append(f"instance {i}: {split.value} != {whole.value}")
    return CriterionResult(5, "block-law", not failures, "200 decomposed-vs-whole solves" + ("; " + "; ".join(failures[:3]) if failures else ""))


def criterion_6_contraction_law(seed: int, witness_pool: list) -> CriterionResult:
    rng = random.Random(seed + 6)
    failures = []
    for i in range(100):
        g = random_two_connected_with_adjacent_two_vertices(rng, rng.randint(4, 9))
        pair = None
        for u in g.vertices():
            if g.degree(u) != 2:
                continue
            for v in sorted(g.adj[u]):
                if g.degree(v) == 2:
                    pair = (u, v)
                    break
            if pair:
                break
        contracted = contract_edge(g, *pair).graph
        res_g = rvd_exact(g, cap=9)
        res_h = rvd_exact(contracted, cap=9)
        witness_pool.append((g, res_g.witness))
        witness_pool.append((contracted, res_h.witness))
        if res_g.value > res_h.value:
            failures.append(f"instance {i}: {res_g.value} > {res_h.value}")
    return CriterionResult(6, "contraction-law", not failures, "100 contractions" + ("; " + "; ".join(failures[:3]) if failures else ""))


def criterion_7_conflict_law(witness_pool: list) -> CriterionResult:
    violations = 0
    checked = 0
    for g, witness in witness_pool:
        if g.n < 2:
            continue
        checked += 1
        cg = conflict_graph(g)
        for u, v in cg.edges():
            if witness.of(u) == witness.of(v):
                violations += 1
                break
    return CriterionResult(
        7, "conflict-law", violations == 0, f"{checked} witnesses, {violations} violations"
    )


def criterion_8_reduction_bipartite() -> CriterionResult:
    failures = []
    for name, g in (("K2", K2), ("P3", P3), ("K3", K3)):
        gadget = bipartite_gadget(g)
        expected = chromatic_number(g) + 2 * g.edge_count
        got = rvd_exact(gadget.graph, cap=16).value
        if got != expected:
            failures.append(f"{name}: {got} != {expected}")
    return CriterionResult(8, "reduction-bipartite", not failures, "K2, P3, K3" + ("; " + "; ".join(failures) if failures else ""))


def criterion_9_reduction_split() -> CriterionResult:
    failures = []
    for name, g in (("K2", K2), ("P3", P3)):
        gadget = split_gadget(g)
        expected = chromatic_number(g) + 3 * g.edge_count
        got = rvd_exact(gadget.graph, cap=16).value
        if got != expected:
            failures.append(f"{name}: {got} != {expected}")
    return CriterionResult(9, "reduction-split", not failures, "K2, P3" + ("; " + "; ".join(failures) if failures else ""))


def criterion_10_chain() -> CriterionResult:
    failures = []
    tight_report = []
    for g, name, k in ((K2, "K2", 1), (K2, "K2", 2), (K3, "K3", 1)):
        for kind in ("bipartite", "split"):
            rep = chain_check(g, k, kind, exact_cap=12)
            if not rep.holds:
                failures.append(f"{name} k={k} {kind}")
            tight_report.append(f"{name}/k{k}/{kind}:{'tight' if rep.tight else 'slack'}")
    return CriterionResult(
        10, "chain-check", not failures,
        ", ".join(tight_report) + ("; FAIL " + "; ".join(failures) if failures else ""),
    )


def criterion_11_size_formulas(seed: int) -> CriterionResult:
    rng = random.Random(seed + 11)
    failures = []
    for i in range(20):
        n = rng.randint(2, 6)
        g = random_connected_graph(rng, n, extra_edges=rng.randint(0, 3))
        k = rng.randint(1, 4)
        m = g.edge_count
        for kind, per_edge in (("bipartite", 4), ("split", 3)):
            gadget = replicated_gadget(g, k, kind)
            if gadget.graph.n != k * g.n + per_edge * m:
                failures.append(f"instance {i} {kind}")
        km = replicated_gadget(g, m, "bipartite")
        if km.graph.n != m * g.n + 4 * m:
            failures.append(f"instance {i} k=|E| bipartite")
        km = replicated_gadget(g, m, "split")
        if km.graph.n != m * g.n + 3 * m:
            failures.append(f"instance {i} k=|E| split")
    return CriterionResult(11, "size-formulas", not failures, "20 random (G, k) pairs" + ("; " + "; ".join(failures[:3]) if failures else ""))


def criterion_12_verifier_soundness(seed: int) -> CriterionResult:
    rng = random.Random(seed + 12)
    disagreements = 0
    for _ in range(1000):
        n = rng.randint(2, 8)
        g = random_connected_graph(rng, n)
        c = VertexColoring(random_coloring(rng, n, rng.randint(1, n)))
        fast = verify_coloring(g, c).verdict
        slow, _pair = naive_verify(g, c)
        if fast != slow:
            disagreements += 1
    return CriterionResult(
        12, "verifier-soundness", disagreements == 0, f"1000 trials, {disagreements} disagreements"
    )


def run_all(seed: int = 0) -> list[CriterionResult]:
    witness_pool: list[tuple[Graph, VertexColoring]] = []
    results = [
        criterion_1_tree_law(witness_pool),
        criterion_2_cycle_law(witness_pool),
        criterion_3_sharpness(witness_pool),
        criterion_4_constructive_bound(seed),
        criterion_5_block_law(seed, witness_pool),
        criterion_6_contraction_law(seed, witness_pool),
    ]
    results.append(criterion_7_conflict_law(witness_pool))
    results.extend(
        [
            criterion_8_reduction_bipartite(),
            criterion_9_reduction_split(),
            criterion_10_chain(),
            criterion_11_size_formulas(seed),
            criterion_12_verifier_soundness(seed),
        ]
    )
    return results
