"""Command line: ``check``, ``bench``, ``gen``, ``oracle`` and ``diff``.

Exit codes: 0 empty (or probably empty), 1 counterexample, 2 usage, format
or contract error.  ``diff`` exits 1 when a disagreement was found.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import kernels
from .automata import explicit_provider
from .bench import (
    CHECK_ALGORITHMS,
    SCHEMA,
    Instance,
    gen_params,
    load_suite,
    parse_instance,
    run_bench,
    run_check,
    run_differential,
)
from .errors import BuchiError, ContractError
from .formats import format_gba, load_gba
from .generators import GENERATORS, generate
from .oracle import oracle_emptiness
from .product import eager_product, load_kripke, load_labeled_gba
from .trace import Trace


def _add_input(p):
    p.add_argument("--gba", metavar="FILE", help="explicit generalized Büchi automaton")
    p.add_argument("--ba", metavar="FILE", help="explicit Büchi automaton (k must be 1)")
    p.add_argument("--kripke", metavar="FILE", help="Kripke structure (use with --prop)")
    p.add_argument("--prop", metavar="FILE", help="labeled property automaton")
    p.add_argument("--gen", nargs="+", metavar="SPEC", help="generator KIND key=value ...")


def _instance(args) -> Instance:
    chosen = [x for x in ("gba", "ba", "kripke", "gen") if getattr(args, x)]
    if len(chosen) != 1:
        raise _Usage("give exactly one of --gba, --ba, --kripke/--prop, --gen")
    if args.gba:
        return Instance(args.gba, gba=load_gba(args.gba))
    if args.ba:
        g = load_gba(args.ba)
        if g.k != 1:
            raise ContractError(f"{args.ba}: --ba expects k=1, file declares k={g.k}")
        return Instance(args.ba, gba=g)
    if args.kripke:
        if not args.prop:
            raise _Usage("--kripke needs --prop")
        return Instance(f"{args.kripke}x{args.prop}", kripke=load_kripke(args.kripke),
                        prop=load_labeled_gba(args.prop))
    return Instance(" ".join(args.gen), gba=generate(args.gen[0], **gen_params(args.gen[1:])))


class _Usage(Exception):
    pass


def _show(p, states):
    return " ".join(str(p.describe(s)).replace(" ", "") for s in states)


def cmd_check(args, out):
    inst = _instance(args)
    algo = args.algo
    if args.bitstate_bits is not None and not algo.startswith("bitstate-"):
        if algo not in ("and", "sd"):
            raise _Usage("--bitstate-bits works with --algo and/sd")
        algo = "bitstate-" + algo
    trace = None
    stream = None
    if args.trace:
        stream = open(args.trace, "w")
        trace = Trace(stream)
    try:
        verdict, metrics = run_check(inst, algo, bits=args.bitstate_bits or 20, runs=args.runs,
                                     seed=args.seed, backend=args.backend, trace=trace)
    finally:
        if stream is not None:
            stream.close()
    p = inst.provider()
    if args.json:
        doc = {"schema": SCHEMA, "algorithm": algo, "instance": inst.name,
               "verdict": verdict.to_json(p.describe), "metrics": metrics.to_json()}
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(verdict.kind, file=out)
        if verdict.flags:
            print("flags: " + ", ".join(verdict.flags), file=out)
        if verdict.is_counterexample:
            print("prefix: " + _show(p, verdict.prefix), file=out)
            print("loop: " + _show(p, verdict.loop), file=out)
        for key, val in metrics.to_json().items():
            print(f"{key}: {val}", file=out)
    return 1 if verdict.is_counterexample else 0


def cmd_oracle(args, out):
    inst = _instance(args)
    if inst.gba is not None:
        g, describe = inst.gba, explicit_provider(inst.gba).describe
    else:
        g, pairs = eager_product(inst.kripke, inst.prop)
        describe = lambda d: list(pairs[int.from_bytes(d, "big")])  # noqa: E731
    verdict = oracle_emptiness(g)
    if args.json:
        print(json.dumps({"schema": SCHEMA, "verdict": verdict.to_json(describe)}, indent=2), file=out)
    else:
        print(verdict.kind, file=out)
        if verdict.is_counterexample:
            print("prefix: " + " ".join(str(describe(s)).replace(" ", "") for s in verdict.prefix), file=out)
            print("loop: " + " ".join(str(describe(s)).replace(" ", "") for s in verdict.loop), file=out)
    return 1 if verdict.is_counterexample else 0


def cmd_bench(args, out):
    if args.suite:
        suite = load_suite(args.suite)
    elif args.instance:
        suite = [parse_instance(spec) for spec in args.instance]
    else:
        raise _Usage("bench needs --suite FILE or --instance SPEC")
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    report = run_bench(suite, algos, baseline=args.baseline, metric=args.metric,
                       backend=args.backend, workers=args.workers,
                       bits=args.bitstate_bits or 20, runs=args.runs, seed=args.seed)
    if args.json:
        print(json.dumps(report.to_json(), indent=2), file=out)
        return 0
    width = max(len(n) for n in report.instances)
    for (inst, algo), (v, m) in report.cells.items():
        print(f"{inst:<{width}}  {algo:<12} {v.kind:<15} post={m.post_calls} "
              f"succ={m.successors_generated} states={m.distinct_states} "
              f"trans={m.transitions_explored} depth={m.max_search_depth}", file=out)
    print(f"\n{report.metric} relative to {report.to_json()['baseline']}:", file=out)
    print(report.format_table(), file=out)
    return 0


def cmd_gen(args, out):
    g = generate(args.kind, **gen_params(args.params))
    spec = " ".join([args.kind] + args.params)
    text = format_gba(g, f"generated: {spec}")
    if args.output:
        Path(args.output).write_text(text)
        if args.manifest:
            manifest = {"schema": SCHEMA, "generator": args.kind,
                        "params": gen_params(args.params), "n": g.n, "k": g.k,
                        "edges": g.edge_count, "oracle": oracle_emptiness(g).kind}
            Path(str(args.output) + ".json").write_text(json.dumps(manifest, indent=2) + "\n")
    else:
        out.write(text)
    return 0


def cmd_diff(args, out):
    ranges = {"n": (1, args.max_n), "k": (0, args.max_k)}
    summary = run_differential(args.count, ranges, seed=args.seed, out_dir=args.out,
                               backend=args.backend)
    if args.json:
        print(json.dumps(summary.to_json(), indent=2), file=out)
    else:
        print(f"instances: {summary.count}  runs: {summary.runs}  "
              f"non-empty: {summary.nonempty}  failures: {len(summary.failures)}", file=out)
        for f in summary.failures:
            print(f"FAIL seed={f.seed} algo={f.algorithm}: {f.reason}"
                  + (f" -> {f.path}" if f.path else ""), file=out)
    return 0 if summary.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="buchi", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", choices=("compiled", "python"), default=None,
                        help=f"search backend (default: {kernels.BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    def bitstate_opts(p):
        p.add_argument("--bitstate-bits", type=int, default=None, metavar="B",
                       help="bitstate table with 2**B slots")
        p.add_argument("--runs", type=int, default=1, metavar="R")
        p.add_argument("--seed", type=int, default=0, metavar="S")

    p = sub.add_parser("check", help="run one emptiness check")
    p.add_argument("--algo", required=True, choices=CHECK_ALGORITHMS)
    _add_input(p)
    bitstate_opts(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--trace", metavar="FILE", help="write a search trace")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="decide emptiness offline")
    _add_input(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run algorithms over a suite")
    p.add_argument("--suite", metavar="FILE")
    p.add_argument("--instance", action="append", metavar="SPEC",
                   help="inline instance spec (repeatable)")
    p.add_argument("--algos", "--algo", dest="algos", default="ascc,gv,and,baseline,c99")
    p.add_argument("--baseline", default=None)
    p.add_argument("--metric", default="post_calls")
    p.add_argument("--workers", type=int, default=1)
    bitstate_opts(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a generated automaton")
    p.add_argument("kind", choices=sorted(GENERATORS))
    p.add_argument("params", nargs="*", metavar="key=value")
    p.add_argument("-o", "--output", metavar="FILE")
    p.add_argument("--manifest", action="store_true", help="also write FILE.json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("diff", help="differential test against the oracle")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=50)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--out", metavar="DIR", help="directory for minimized failures")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args, out)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except ContractError as exc:
        print(f"refused: {exc}", file=sys.stderr)
    except BuchiError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
