"""Command-line surface: one executable exposing every capability with
stable text output and exit codes (0 ok, 1 check failed, 2 input error,
3 desk-scale cap exceeded)."""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .graph import (
    Graph,
    GraphError,
    ColoringError,
    emit_coloring,
    emit_edge_list,
    parse_coloring,
    parse_edge_list,
    to_dot,
)
from .exact import DeskScaleError, bounds, rvd_exact
from .recognize import StructureKind, find_structure, is_k4_minor_free
from .verify import verify_coloring
from .colorer import color_k4mf
from .gadgets import bipartite_gadget, chain_check, replicated_gadget, roundtrip_check, split_gadget
from . import selftest as selftest_mod

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_CAP_EXCEEDED = 3


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    report: str


def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rvd", description=__doc__)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    p.add_argument("--cap", type=int, default=12, help="desk-scale cap for exact search")
    p.add_argument("--jobs", type=int, default=1, help="parallel block solves")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("recognize", help="K4-minor-freeness and structure locator")
    sp.add_argument("graph")

    sp = sub.add_parser("bounds", help="lower/upper bound report")
    sp.add_argument("graph")

    sp = sub.add_parser("exact", help="exact rvd with witness coloring")
    sp.add_argument("graph")
    sp.add_argument("--no-decompose", action="store_true")

    sp = sub.add_parser("verify", help="check a coloring file against a graph")
    sp.add_argument("graph")
    sp.add_argument("coloring")

    sp = sub.add_parser("color-k4mf", help="constructive coloring within max degree")
    sp.add_argument("graph")
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--dot", action="store_true", help="also emit DOT with colors")

    sp = sub.add_parser("gadget", help="hardness-reduction gadget")
    sp.add_argument("graph")
    sp.add_argument("--kind", choices=("bipartite", "split"), required=True)
    sp.add_argument("--replicate", type=int, default=1)
    sp.add_argument("--output", help="write edge list here plus .roles sidecar")

    sp = sub.add_parser("roundtrip", help="reduction equivalence at one k")
    sp.add_argument("graph")
    sp.add_argument("--kind", choices=("bipartite", "split"), required=True)
    sp.add_argument("--colors", type=int, required=True)

    sp = sub.add_parser("chain", help="replicated-gadget inequality chain")
    sp.add_argument("graph")
    sp.add_argument("--kind", choices=("bipartite", "split"), required=True)
    sp.add_argument("--kfold", type=int, default=1)

    sub.add_parser("selftest", help="run the acceptance criteria")
    return p


def run(argv: list[str]) -> CommandOutcome:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandOutcome(EXIT_INPUT_ERROR if exc.code else EXIT_OK, "")
    try:
        return _dispatch(args)
    except (GraphError, ColoringError, OSError) as exc:
        return CommandOutcome(EXIT_INPUT_ERROR, f"error: {exc}\n")
    except DeskScaleError as exc:
        return CommandOutcome(EXIT_CAP_EXCEEDED, f"cap exceeded: {exc}\n")


def _dispatch(args) -> CommandOutcome:
    cmd = args.command
    if cmd == "recognize":
        g = _load_graph(args.graph)
        lines = [f"n={g.n}", f"m={g.edge_count}", f"delta={g.max_degree()}"]
        free = is_k4_minor_free(g)
        lines.append(f"k4mf={'true' if free else 'false'}")
        if free and g.n >= 2:
            from .graph import is_connected

            if is_connected(g):
                loc = find_structure(g)
                lines.append(f"structure={loc.kind.value}")
                if loc.kind == StructureKind.MIN_DEGREE_LEQ_ONE:
                    lines.append(f"witness={loc.low_degree_vertex}")
                elif loc.kind == StructureKind.ADJACENT_TWO_VERTICES:
                    lines.append(f"witness={loc.adjacent_pair[0]},{loc.adjacent_pair[1]}")
                else:
                    lines.append(f"hub={loc.hub}")
                    lines.append(f"t_set={','.join(map(str, sorted(loc.hub_t_set)))}")
                    lines.append(f"q_set={','.join(map(str, sorted(loc.hub_q_set)))}")
                    lines.append(f"claim1={'true' if loc.claim1_satisfied else 'false'}")
        return CommandOutcome(EXIT_OK, "\n".join(lines) + "\n")

    if cmd == "bounds":
        g = _load_graph(args.graph)
        rep = bounds(g)
        lines = [
            f"delta_min={rep.min_degree}",
            f"conflict_chromatic={rep.conflict_chromatic}",
            f"injective_chromatic={rep.injective_chromatic}",
            f"block_max_hint={rep.block_max_hint if rep.block_max_hint is not None else 'none'}",
            f"lower={rep.lower}",
            f"upper={rep.upper}",
        ]
        return CommandOutcome(EXIT_OK, "\n".join(lines) + "\n")

    if cmd == "exact":
        g = _load_graph(args.graph)
        res = rvd_exact(g, cap=args.cap, decompose=not args.no_decompose, jobs=args.jobs)
        body = emit_coloring(res.witness)
        tail = f"rvd={res.value}\npalette={res.witness.palette_size}\nnodes={res.stats.nodes}\nblocks={res.stats.blocks}\n"
        return CommandOutcome(EXIT_OK, body + tail)

    if cmd == "verify":
        g = _load_graph(args.graph)
        with open(args.coloring, "r", encoding="utf-8") as fh:
            coloring = parse_coloring(fh.read(), g)
        report = verify_coloring(g, coloring)
        if report.verdict:
            return CommandOutcome(
                EXIT_OK, f"verdict=true\npairs={len(report.witnesses)}\n"
            )
        x, y = report.failing_pair
        return CommandOutcome(EXIT_CHECK_FAILED, f"verdict=false\nfailing_pair={x},{y}\n")

    if cmd == "color-k4mf":
        g = _load_graph(args.graph)
        coloring, trace = color_k4mf(g)
        body = emit_coloring(coloring)
        tail = f"palette={coloring.palette_size}\ndelta={g.max_degree()}\nfallbacks={trace.fallback_count}\n"
        if args.trace:
            tail += "trace:\n" + "\n".join(f"  {s}" for s in trace.steps) + "\n"
        if args.dot:
            tail += to_dot(g, coloring)
        return CommandOutcome(EXIT_OK, body + tail)

    if cmd == "gadget":
        g = _load_graph(args.graph)
        if args.replicate == 1:
            gadget = bipartite_gadget(g) if args.kind == "bipartite" else split_gadget(g)
        else:
            gadget = replicated_gadget(g, args.replicate, args.kind)
        edge_text = emit_edge_list(gadget.graph)
        role_lines = [f"{v} {gadget.role_map[v]}" for v in sorted(gadget.role_map)]
        role_text = "\n".join(role_lines) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(edge_text)
            with open(args.output + ".roles", "w", encoding="utf-8") as fh:
                fh.write(role_text)
            return CommandOutcome(
                EXIT_OK,
                f"written={args.output}\nroles={args.output}.roles\nvertices={gadget.graph.n}\n",
            )
        return CommandOutcome(
            EXIT_OK, edge_text + "-- roles --\n" + role_text + f"vertices={gadget.graph.n}\n"
        )

    if cmd == "roundtrip":
        g = _load_graph(args.graph)
        ok = roundtrip_check(g, args.colors, args.kind, cap=max(args.cap, 16))
        report = f"kind={args.kind}\ncolors={args.colors}\npass={'true' if ok else 'false'}\n"
        return CommandOutcome(EXIT_OK if ok else EXIT_CHECK_FAILED, report)

    if cmd == "chain":
        g = _load_graph(args.graph)
        rep = chain_check(g, args.kfold, args.kind, exact_cap=args.cap)
        lines = [f"kind={rep.kind}", f"kfold={rep.k}"]
        lines.extend(f"{name}={value}" for name, value in rep.terms())
        lines.append(f"holds={'true' if rep.holds else 'false'}")
        lines.append(f"tight={'true' if rep.tight else 'false'}")
        return CommandOutcome(
            EXIT_OK if rep.holds else EXIT_CHECK_FAILED, "\n".join(lines) + "\n"
        )

    if cmd == "selftest":
        results = selftest_mod.run_all(seed=args.seed)
        lines = [str(r) for r in results]
        ok = all(r.passed for r in results)
        lines.append(f"selftest={'pass' if ok else 'fail'}")
        return CommandOutcome(EXIT_OK if ok else EXIT_CHECK_FAILED, "\n".join(lines) + "\n")

    raise AssertionError(f"unhandled command {cmd}")  # pragma: no cover


def main() -> None:
    outcome = run(sys.argv[1:])
    if outcome.report:
        sys.stdout.write(outcome.report)
    sys.exit(outcome.exit_code)


if __name__ == "__main__":
    main()
