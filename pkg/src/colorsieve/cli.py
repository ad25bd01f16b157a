"""``colorsieve`` command line.

Exit codes: 0 yes (or success), 1 no, 2 error.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional, Sequence

from . import oracle
from .graph_core import GraphError, parse_digraph
from .planar_pfaffian import EmbeddingError, parse_planar
from .sieve import SieveCapacityError
from .solvers import (
    SolveConfig,
    SolveReport,
    SolverError,
    recover_kiob_witness,
    solve_colorful_ob,
    solve_colorful_ob_exact,
    solve_colorful_pm,
    solve_kiob,
)
from .splitters import SplitterError, enumerate_vectors, greedy_splitter, indexed_splitter

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="colorsieve", description="Algebraic color-coding solvers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solver(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--input", required=True, help="instance file, '-' for stdin")
        sp.add_argument("--k", type=_positive, required=True)
        sp.add_argument("--space", choices=("poly", "exp"), default="poly")
        sp.add_argument("--threads", type=_positive, default=1)
        sp.add_argument("--memory-budget", type=_positive, default=None, help="bytes for sieve tables")
        return sp

    iob = solver("iob", "k-internal out-branching")
    iob.add_argument("--recover", action="store_true", help="print a witness branching")
    ob = solver("colorful-ob", "k-colorful out-branching")
    ob.add_argument("--exact-k", action="store_true", help="instance has exactly k colors")
    solver("colorful-pm", "k-colorful perfect matching in a planar graph")

    sp = sub.add_parser("splitter", help="build, stream or verify a splitter")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--k", type=_positive, required=True)
    sp.add_argument("--t", type=_positive, default=None)
    sp.add_argument("--greedy", action="store_true", help="greedy family instead of the indexed one")
    sp.add_argument("--alpha", type=float, default=1.0, help="color stretch of the greedy family")
    sp.add_argument("--limit", type=int, default=None, help="stream at most this many vectors")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--enumerate", action="store_true", help="print the vectors")

    orc = sub.add_parser("oracle", help="brute-force answers for small instances")
    orc.add_argument("what", choices=("iob", "ob-count", "pm-enum", "max-internal"))
    orc.add_argument("--input", required=True)
    orc.add_argument("--k", type=_positive, default=None, help="threshold for 'iob'")
    orc.add_argument("--root", type=_positive, default=None, help="root for 'ob-count'")
    return p


def _stats_line(report: SolveReport) -> str:
    s = report.stats
    return f"stats colorings={s.colorings} evals={s.evaluations} ms={s.elapsed * 1000:.0f}"


def _config(args) -> SolveConfig:
    kwargs = dict(k=args.k, space_mode=args.space, parallelism=args.threads)
    if args.memory_budget is not None:
        kwargs["memory_budget"] = args.memory_budget
    if getattr(args, "recover", False):
        kwargs["recover"] = True
    return SolveConfig(**kwargs)


def _emit(report: SolveReport, out, digraph=None) -> int:
    print("YES" if report.answer else "NO", file=out)
    if report.witness is not None and digraph is not None:
        for a in report.witness.arc_indices():
            arc = digraph.arcs[a]
            print(f"w {arc.tail} {arc.head}", file=out)
    print(_stats_line(report), file=out)
    return EXIT_YES if report.answer else EXIT_NO


def _cmd_iob(args, out) -> int:
    d = parse_digraph(_read(args.input))
    cfg = _config(args)
    report = solve_kiob(d, cfg)
    if report.answer and cfg.recover and report.witness is None:
        report.witness = recover_kiob_witness(d, cfg.k, cfg)
    return _emit(report, out, d)


def _cmd_colorful_ob(args, out) -> int:
    d = parse_digraph(_read(args.input))
    solve = solve_colorful_ob_exact if args.exact_k else solve_colorful_ob
    return _emit(solve(d, _config(args)), out)


def _cmd_colorful_pm(args, out) -> int:
    g = parse_planar(_read(args.input))
    return _emit(solve_colorful_pm(g, _config(args)), out)


def _cmd_splitter(args, out) -> int:
    started = time.perf_counter()
    if args.greedy:
        family = greedy_splitter(args.n, args.k, args.alpha)
    else:
        family = indexed_splitter(args.n, args.k, args.t)
    t = family.spec.t
    stop = len(family) if args.limit is None else min(len(family), args.limit)
    streamed = 0

    def stream():
        nonlocal streamed
        for vec in enumerate_vectors(family, 0, stop):
            streamed += 1
            if args.enumerate:
                print("v " + " ".join(map(str, vec)), file=out)
            yield vec

    code = EXIT_YES
    if args.verify:
        vectors = stream()
        ok, missing = oracle.verify_splitter(vectors, args.n, args.k, t)
        for _ in vectors:  # finish the requested range
            pass
        print("YES" if ok else "NO", file=out)
        if not ok:
            print("uncovered " + " ".join(map(str, missing)), file=out)
            code = EXIT_NO
    else:
        for _ in stream():
            pass
    ms = (time.perf_counter() - started) * 1000
    print(f"stats size={len(family)} t={t} streamed={streamed} ms={ms:.0f}", file=out)
    return code


def _cmd_oracle(args, out) -> int:
    text = _read(args.input)
    if args.what == "pm-enum":
        g = parse_planar(text)
        count = 0
        for m in oracle.enum_perfect_matchings(g):
            count += 1
            print("m " + " ".join(str(e + 1) for e in sorted(m)), file=out)
        print(f"count {count}", file=out)
        return EXIT_YES
    d = parse_digraph(text)
    if args.what == "ob-count":
        roots = [args.root] if args.root else list(d.vertices())
        total = 0
        for r in roots:
            if not 1 <= r <= d.n:
                raise GraphError(f"root {r} outside 1..{d.n}")
            total += sum(1 for _ in oracle.enum_out_branchings(d, r))
        print(f"count {total}", file=out)
        return EXIT_YES
    best = oracle.max_internal(d)
    if args.what == "max-internal":
        print("none" if best is None else f"max_internal {best}", file=out)
        return EXIT_YES if best is not None else EXIT_NO
    if args.k is None:
        raise _UsageError("oracle iob needs --k")
    yes = best is not None and best >= args.k
    print("YES" if yes else "NO", file=out)
    return EXIT_YES if yes else EXIT_NO


_COMMANDS = {
    "iob": _cmd_iob,
    "colorful-ob": _cmd_colorful_ob,
    "colorful-pm": _cmd_colorful_pm,
    "splitter": _cmd_splitter,
    "oracle": _cmd_oracle,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(f"colorsieve: usage error: {exc}", file=err)
    except OSError as exc:
        print(f"colorsieve: {exc}", file=err)
    except (GraphError, EmbeddingError, SolverError, SplitterError, SieveCapacityError,
            oracle.OracleGuardError, ValueError) as exc:
        print(f"colorsieve: {exc}", file=err)
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
