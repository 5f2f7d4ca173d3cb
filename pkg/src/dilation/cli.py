"""Command line interface.

Exit status: 0 success, 1 invalid input, 2 usage error, 3 bound check
failed. Human-readable output goes to stdout; ``--report FILE`` also writes
a tab-separated, line-oriented report that contains no timings, so equal
inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__
from .analysis import average_dilation
from .augment import DEFAULT_CAP, check_key_lemma, check_theorem_bounds, greedy_augment, optimal_augment
from .errors import DilationError, LemmaViolation
from .instance import MODELS, Instance, emit_instance, fmt, generate_instance, read_instance
from .shortcuts import ShortcutSet
from .signatures import benefit_decomposition

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class Report:
    """Collects ``key<TAB>value`` lines and tab-separated rows."""

    def __init__(self, command: str):
        self.lines = [f"command\t{command}"]

    def kv(self, key: str, value) -> None:
        self.lines.append(f"{key}\t{_cell(value)}")

    def row(self, *cells) -> None:
        self.lines.append("\t".join(_cell(c) for c in cells))

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def write(self, path: str | None) -> None:
        if path:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(self.text())


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def _instance_summary(rep: Report, inst: Instance) -> None:
    rep.kv("n", inst.n)
    rep.kv("m", inst.graph.m)
    rep.kv("metric", inst.space.backend)


def parse_shortcuts(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split("-")
        if len(parts) != 2:
            raise ValueError(f"bad shortcut {item!r}; expected u-v")
        out.append((int(parts[0]), int(parts[1])))
    return out


def cmd_gen(args) -> int:
    inst = generate_instance(args.model, args.n, args.seed, collinear=args.collinear)
    comment = f"model={args.model} n={args.n} seed={args.seed}" + (" collinear" if args.collinear else "")
    text = emit_instance(inst, comment)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        print(f"wrote {args.out}: n={inst.n} m={inst.graph.m}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_eval(args) -> int:
    inst = read_instance(args.file)
    rep = average_dilation(inst.graph)
    print(f"instance: n={inst.n} m={inst.graph.m} metric={inst.space.backend}")
    print(f"average dilation: {rep.average:.7f}")
    print(f"maximum dilation: {rep.maximum:.7g}")
    out = Report("eval")
    _instance_summary(out, inst)
    out.kv("pair_count", rep.pair_count)
    out.kv("average_dilation", rep.average)
    out.kv("max_dilation", rep.maximum)
    out.write(args.report)
    return EXIT_OK


def cmd_augment(args) -> int:
    inst = read_instance(args.file)
    graph = inst.graph
    before = average_dilation(graph)
    out = Report("augment")
    _instance_summary(out, inst)
    out.kv("algorithm", args.algorithm)
    out.kv("k", args.k)
    print(f"instance: n={inst.n} m={graph.m} metric={inst.space.backend}")
    print(f"before: average {before.average:.7f}  maximum {before.maximum:.7g}")

    if args.algorithm == "greedy":
        steps = args.steps if args.steps is not None else args.k
        trace = greedy_augment(graph, steps, threads=args.threads, stop_when_flat=args.stop_when_flat)
        chosen = trace.edges
        total = trace.benefit_after(len(chosen))
        out.kv("steps", steps)
        for s in trace.steps:
            flag = "  (flat)" if s.flat else ""
            print(f"step {s.index}: edge ({s.edge[0]},{s.edge[1]})  benefit {s.benefit:.7f}  "
                  f"average {s.average:.7f}  candidates {s.candidates}  {s.seconds:.3f}s{flag}")
        if trace.truncated:
            print("no candidate non-edges left; trace truncated")
        if trace.stopped_flat:
            print("stopped: no candidate improves the benefit")
        out.kv("truncated", trace.truncated)
        out.kv("stopped_flat", trace.stopped_flat)
        rows = [("step", s.index, s.edge[0], s.edge[1], s.benefit, s.average) for s in trace.steps]
    else:
        res = optimal_augment(graph, args.k, cap=args.cap)
        chosen = list(res.shortcuts.edges)
        total = res.benefit
        for u, v in chosen:
            print(f"shortcut ({u},{v})")
        if res.truncated:
            print("k exceeds the number of candidate non-edges; all candidates added")
        print(f"subsets enumerated: {res.subsets}")
        out.kv("truncated", res.truncated)
        out.kv("subsets", res.subsets)
        rows = [("shortcut", u, v) for u, v in chosen]

    after = average_dilation(graph.with_edges(chosen)) if chosen else before
    print(f"after:  average {after.average:.7f}  maximum {after.maximum:.7g}")
    print(f"benefit: {total:.7f}")
    out.kv("before_average", before.average)
    out.kv("before_max", before.maximum)
    out.kv("after_average", after.average)
    out.kv("after_max", after.maximum)
    out.kv("benefit", total)
    for r in rows:
        out.row(*r)
    out.write(args.report)
    return EXIT_OK


def cmd_signatures(args) -> int:
    inst = read_instance(args.file)
    try:
        pairs = parse_shortcuts(args.shortcuts)
    except ValueError as exc:
        print(f"error: --shortcuts: {exc}", file=sys.stderr)
        return EXIT_USAGE
    shortcuts = ShortcutSet(inst.space, pairs)
    dec = benefit_decomposition(inst.graph, shortcuts)
    print(f"shortcuts: {', '.join(f'{u}-{v}' for u, v in shortcuts)}")
    print(f"benefit: {dec.total:.7f}")
    for (a, b) in sorted(dec.classes):
        print(f"signature ({a},{b}): {dec.classes[(a, b)]:.7f}")
    print(f"no-shortcut pairs contribute: {dec.none_contribution:.7g}")
    print(f"decomposition residual: {dec.residual:.3g}  {'ok' if dec.holds() else 'FAILED'}")
    out = Report("signatures")
    _instance_summary(out, inst)
    out.kv("shortcuts", ",".join(f"{u}-{v}" for u, v in shortcuts))
    out.kv("benefit", dec.total)
    out.kv("none_contribution", dec.none_contribution)
    out.kv("decomposed_total", dec.decomposed_total)
    out.kv("decomposition_holds", dec.holds())
    for (a, b) in sorted(dec.classes):
        out.row("signature", a, b, dec.classes[(a, b)])
    for (u, v), sig in dec.signatures.items():
        a, b = sig if sig is not None else (None, None)
        out.row("pair", u, v, a, b, dec.ledger.pair(u, v))
    out.write(args.report)
    return EXIT_OK


def cmd_check_bounds(args) -> int:
    inst = read_instance(args.file)
    graph = inst.graph
    k = args.k
    bounds = check_theorem_bounds(graph, k, cap=args.cap, threads=args.threads)
    print(f"instance: n={inst.n} m={graph.m} metric={inst.space.backend}")
    print(f"optimal benefit (k={k}): {bounds.optimal_benefit:.7f}  "
          f"F* = {', '.join(f'{u}-{v}' for u, v in bounds.optimal_shortcuts)}")
    print(f"greedy after {k} steps: {bounds.greedy_benefit_at_k:.7f}  (need >= B*/{8 * k})  "
          f"{'ok' if bounds.theorem_k_satisfied else 'VIOLATED'}")
    print(f"greedy after {4 * k * k} steps: {bounds.greedy_benefit_at_4k2:.7f}  (need >= B*/2)  "
          f"{'ok' if bounds.theorem_4k2_satisfied else 'VIOLATED'}")
    if bounds.trivial:
        print("trivial instance: optimal benefit is 0")

    out = Report("check-bounds")
    _instance_summary(out, inst)
    out.kv("k", k)
    out.kv("optimal_benefit", bounds.optimal_benefit)
    out.kv("optimal_shortcuts", ",".join(f"{u}-{v}" for u, v in bounds.optimal_shortcuts) or None)
    out.kv("greedy_benefit_k", bounds.greedy_benefit_at_k)
    out.kv("greedy_benefit_4k2", bounds.greedy_benefit_at_4k2)
    out.kv("ratio_k", bounds.ratio_k)
    out.kv("ratio_4k2", bounds.ratio_4k2)
    out.kv("theorem_k_satisfied", bounds.theorem_k_satisfied)
    out.kv("theorem_4k2_satisfied", bounds.theorem_4k2_satisfied)
    out.kv("trivial", bounds.trivial)

    lemma_ok = True
    edges = list(bounds.greedy_edges)
    for i in range(min(k, len(edges) + 1)):
        try:
            v = check_key_lemma(graph, edges[:i], k, optimal_benefit=bounds.optimal_benefit)
        except LemmaViolation as exc:
            lemma_ok = False
            print(f"lemma at prefix {i}: VIOLATED ({exc})")
            out.row("lemma", i, "violated", None, None)
            continue
        w = v.witness
        print(f"lemma at prefix {i}: branch {v.branch}" + (f", witness ({w[0]},{w[1]})" if w else ""))
        out.row("lemma", i, v.branch, None if w is None else w[0], None if w is None else w[1])
    out.kv("lemma_satisfied", lemma_ok)
    out.write(args.report)
    return EXIT_OK if bounds.satisfied and lemma_ok else EXIT_BOUND


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dilation", description="Average dilation analysis and greedy shortcut augmentation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--model", choices=MODELS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--collinear", action="store_true", help="place point i at coordinate i on a line")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="report average and maximum dilation")
    e.add_argument("file")
    e.add_argument("--report")
    e.set_defaults(func=cmd_eval)

    a = sub.add_parser("augment", help="add shortcut edges")
    a.add_argument("file")
    a.add_argument("--k", type=_positive, required=True)
    a.add_argument("--steps", type=_positive, help="greedy steps (default: k)")
    a.add_argument("--algorithm", choices=("greedy", "optimal"), default="greedy")
    a.add_argument("--stop-when-flat", action="store_true")
    a.add_argument("--threads", type=_positive, default=1)
    a.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="subset cap for --algorithm optimal")
    a.add_argument("--report")
    a.set_defaults(func=cmd_augment)

    s = sub.add_parser("signatures", help="decompose the benefit of a shortcut set by signature")
    s.add_argument("file")
    s.add_argument("--shortcuts", required=True, help='e.g. "0-3,1-2"')
    s.add_argument("--report")
    s.set_defaults(func=cmd_signatures)

    c = sub.add_parser("check-bounds", help="compare greedy with the exhaustive optimum")
    c.add_argument("file")
    c.add_argument("--k", type=_positive, required=True)
    c.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    c.add_argument("--threads", type=_positive, default=1)
    c.add_argument("--report")
    c.set_defaults(func=cmd_check_bounds)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and args.n < 2:
        parser.error("--n must be at least 2")
    try:
        return args.func(args)
    except DilationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Like :func:`main` but returns 2 instead of raising on usage errors."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
