"""Command-line front end.

Subcommands: ``gen``, ``mec``, ``asreach``, ``parity``, ``bench``.
Exit codes: 0 success, 1 usage error, 2 parse/validation error,
3 internal invariant violation (including --verify mismatches).
The environment variable ``SYMMDP_OUT_DIR`` sets the default output
directory for generated files and reports.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .core import ContractViolation
from .mdpfile import MdpParseError, parse_mdp, write_mdp
from .generators import FAMILIES, generate
from .mec import RunStats, default_gamma, gamma_for_epsilon
from .metrics import (bench_matrix, report_from_meter, rows_to_csv,
                      rows_to_json, run_mec_metrics)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _out_path(name, explicit):
    if explicit:
        return explicit
    base = os.environ.get("SYMMDP_OUT_DIR", ".")
    return os.path.join(base, name)


def _resolve_gamma(n, args):
    if args.gamma is not None and args.epsilon is not None:
        raise UsageError("--gamma and --epsilon are mutually exclusive")
    if args.gamma is not None:
        return args.gamma, None
    if args.epsilon is not None:
        return gamma_for_epsilon(n, args.epsilon), args.epsilon
    return default_gamma(n), None


def _print_metrics(report, out=None):
    text = json.dumps(report.to_dict(), indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_gen(args):
    model = generate(args.family, args.n, avg_degree=args.avg_degree,
                     random_fraction=args.random_fraction, d=args.d,
                     seed=args.seed, cycle_len=args.cycle_len)
    path = _out_path(f"{args.family}_n{args.n}_s{args.seed}.mdp", args.out)
    write_mdp(model, path, header_comment=(
        f"family={args.family} n={args.n} seed={args.seed}"))
    print(path)
    return EXIT_OK


def cmd_mec(args):
    model = parse_mdp(args.path)
    gamma, epsilon = _resolve_gamma(model.n, args)
    mec_ids, non_mec, report = run_mec_metrics(
        model, algo=args.algo, gamma=gamma if args.algo == "separator" else None,
        epsilon=epsilon, timings=args.timings)
    for i, ids in enumerate(mec_ids):
        print(f"MEC {i}: {' '.join(str(v) for v in ids)}")
    print(f"non-MEC: {' '.join(str(v) for v in non_mec)}")
    if args.list_trivial:
        rand = set(model.random_vertices)
        trivial = [v for v in non_mec if v not in rand]
        print(f"trivial MECs: {' '.join(str(v) for v in trivial)}")
    _print_metrics(report, args.out)
    if args.verify:
        from .oracle import explicit_mec

        mecs, non = explicit_mec(model.to_explicit())
        got = sorted([frozenset(t) for t in mec_ids], key=min)
        want = sorted(mecs, key=min)
        if got != want or frozenset(non_mec) != frozenset(non):
            print("VERIFY: MISMATCH against explicit oracle", file=sys.stderr)
            return EXIT_INVARIANT
        print("VERIFY: ok")
    return EXIT_OK


def _run_region(args, mode):
    from .mec import RunStats
    from .objectives import PriorityMap, asw_parity, sym_as_reach

    model = parse_mdp(args.path)
    gamma, epsilon = _resolve_gamma(model.n, args)
    P = model.to_symbolic()
    stats = RunStats()
    start = time.perf_counter()
    if mode == "reach":
        targets = sorted(set(int(t) for t in args.targets.split(",") if t != ""))
        for t in targets:
            if not 0 <= t < model.n:
                raise MdpParseError(f"target vertex {t} outside [0,{model.n})")
        tset = P.ctx.from_ids(targets)
        region = sym_as_reach(tset, P, gamma, stats)
        tset.release()
    else:
        if model.priorities is None:
            raise MdpParseError("parity analysis needs vertex priorities in the file")
        pm = PriorityMap(P.ctx, model.priorities)
        region = asw_parity(pm, P, gamma, stats)
        pm.release()
    elapsed = time.perf_counter() - start
    win = sorted(int(v) for v in region.asw.to_ids())
    region.asw.release()
    report = report_from_meter(
        P.ctx.meter, family=model.meta.get("family", "file"), n=model.n,
        m=model.m, seed=model.meta.get("seed", 0),
        algo=f"asw-{mode}", epsilon=epsilon, gamma=gamma,
        recursion_depth=stats.max_depth,
        wall_time_s=elapsed if args.timings else None)
    print(f"ASW({mode}): {' '.join(str(v) for v in win)}")
    _print_metrics(report, args.out)
    if args.verify:
        from .oracle import explicit_asw_parity, explicit_asw_reach

        g = model.to_explicit()
        want = (explicit_asw_reach(g, set(targets)) if mode == "reach"
                else explicit_asw_parity(g))
        if set(win) != want:
            print("VERIFY: MISMATCH against explicit oracle", file=sys.stderr)
            return EXIT_INVARIANT
        print("VERIFY: ok")
    return EXIT_OK


def cmd_asreach(args):
    return _run_region(args, "reach")


def cmd_parity(args):
    return _run_region(args, "parity")


def cmd_bench(args):
    rows = bench_matrix(
        families=args.families.split(","),
        n_list=[int(x) for x in args.n_list.split(",")],
        epsilon_list=[float(x) for x in args.epsilon_list.split(",")],
        seeds=[int(x) for x in args.seeds.split(",")],
        algos=args.algos.split(","),
        avg_degree=args.avg_degree, random_fraction=args.random_fraction,
        cycle_len=args.cycle_len, timings=args.timings)
    path = _out_path("bench.csv", args.out)
    text = rows_to_json(rows) if path.endswith(".json") else rows_to_csv(rows)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(path)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="symmdp",
                description="Set-based symbolic MDP analysis: MEC decomposition, "
                            "almost-sure reachability, qualitative parity.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random MDP file")
    g.add_argument("--family", choices=FAMILIES, default="uniform")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--avg-degree", dest="avg_degree", type=float, default=4.0)
    g.add_argument("--random-fraction", dest="random_fraction", type=float, default=0.3)
    g.add_argument("--d", type=int, default=None, help="emit priorities in [0, 2d]")
    g.add_argument("--cycle-len", dest="cycle_len", type=int, default=8)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    def common(sp, with_algo=False):
        sp.add_argument("path")
        sp.add_argument("--gamma", type=int, default=None)
        sp.add_argument("--epsilon", type=float, default=None)
        if with_algo:
            sp.add_argument("--algo", choices=("separator", "classical"),
                            default="separator")
        sp.add_argument("--verify", action="store_true",
                        help="cross-check against the explicit oracle")
        sp.add_argument("--timings", action="store_true",
                        help="include wall time in the report (non-deterministic)")
        sp.add_argument("--out", default=None, help="write the metrics report here")

    m = sub.add_parser("mec", help="MEC decomposition")
    common(m, with_algo=True)
    m.add_argument("--list-trivial", action="store_true",
                   help="also list trivial MECs (player-1 vertices in no non-trivial MEC)")
    m.set_defaults(func=cmd_mec)

    a = sub.add_parser("asreach", help="almost-sure reachability")
    common(a)
    a.add_argument("--targets", required=True, help="comma-separated target vertex ids")
    a.set_defaults(func=cmd_asreach)

    q = sub.add_parser("parity", help="almost-sure parity winning region")
    common(q)
    q.set_defaults(func=cmd_parity)

    b = sub.add_parser("bench", help="benchmark sweep over generated instances")
    b.add_argument("--families", default="uniform,cycle-chain")
    b.add_argument("--n-list", dest="n_list", default="256,512,1024")
    b.add_argument("--epsilon-list", dest="epsilon_list", default="0.5")
    b.add_argument("--seeds", default="1")
    b.add_argument("--algos", default="separator,classical")
    b.add_argument("--avg-degree", dest="avg_degree", type=float, default=4.0)
    b.add_argument("--random-fraction", dest="random_fraction", type=float, default=0.3)
    b.add_argument("--cycle-len", dest="cycle_len", type=int, default=8)
    b.add_argument("--timings", action="store_true")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MdpParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ContractViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
