"""Command-line interface.

Subcommands: gen, sigma, rho-bounds, oracle, reduce-sat, bench.
Exit codes: 0 success, 2 input error, 3 cap/resource exhaustion,
4 numerical-certificate failure.  ES_THREADS caps bench parallelism.

CSV rows carry: achieved strategy ratio (`ratio`), a certified lower bound
on the optimum (`certified_bound`), and the exact optimum when the oracle
ran (`oracle_value`).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import deterministic, instances, oracle, randomized
from .errors import (
    CapExceededError,
    ExpandingSearchError,
    FormatError,
    GraphValidationError,
    InvalidParamsError,
    NotATreeError,
    NumericalFailureError,
    PreconditionViolatedError,
    TooManyTerminalsForExactError,
    UnsupportedGraphClassError,
)
from .formats import (
    ReportRow,
    read_dimacs,
    read_graph_text,
    rows_to_csv,
    write_graph_text,
)
from .graphs import star_closure
from .search import best_prefix_bound, mixed_payoffs

_INPUT_ERRORS = (FormatError, GraphValidationError, InvalidParamsError,
                 NotATreeError, PreconditionViolatedError,
                 UnsupportedGraphClassError, ValueError, OSError)
_CAP_ERRORS = (CapExceededError, TooManyTerminalsForExactError)


def _load_instance(args):
    if args.instance is not None:
        with open(args.instance) as fh:
            G = read_graph_text(fh.read())
        return G, os.path.basename(args.instance), "file"
    if args.family is None:
        raise InvalidParamsError("give an instance file or --family")
    params = {}
    for key in ("n", "lo", "hi", "p", "length"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    G = instances.gen_instance(args.family, seed=args.seed, **params)
    return G, f"{args.family}-s{args.seed}", args.family


def _family_options(sub):
    sub.add_argument("instance", nargs="?", help="graph file (omit to generate)")
    sub.add_argument("--family", help="generator family")
    sub.add_argument("--n", type=int)
    sub.add_argument("--lo", type=Fraction)
    sub.add_argument("--hi", type=Fraction)
    sub.add_argument("--p", type=float)
    sub.add_argument("--length", type=Fraction)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--format", choices=("text", "csv"), default="text")


def _emit(rows, args):
    if args.format == "csv":
        sys.stdout.write(rows_to_csv(rows))
    else:
        for row in rows:
            fields = []
            for name, value in (("ratio", row.ratio),
                                ("certified_bound", row.certified_bound),
                                ("oracle_value", row.oracle_value)):
                if value is not None:
                    fields.append(f"{name}={float(value):.12g}")
            fields.append(f"{row.seconds:.3f}s")
            print(f"{row.instance} [{row.method}] " + "  ".join(fields))


def sigma_rows(G, name, family, cap, want_oracle, steiner="exact") -> list[ReportRow]:
    rows = []
    oracle_value = None
    if G.is_tree or G.is_unweighted:
        t0 = time.perf_counter()
        _, sigma = deterministic.distance_order_search(G)
        oracle_value = sigma
        rows.append(ReportRow(name, family, G.n, "sigma/distance-order",
                              ratio=sigma, certified_bound=sigma,
                              oracle_value=sigma,
                              seconds=time.perf_counter() - t0))
    else:
        t0 = time.perf_counter()
        result = deterministic.doubling_search(G, steiner_mode=steiner)
        rows.append(ReportRow(
            name, family, G.n, f"sigma/doubling-{steiner}",
            ratio=result.sigma,
            certified_bound=result.sigma / result.certified_factor,
            seconds=time.perf_counter() - t0))
        if want_oracle:
            t0 = time.perf_counter()
            sigma, _ = deterministic.brute_force_sigma(G, cap)
            oracle_value = sigma
            rows.append(ReportRow(name, family, G.n, "sigma/brute-force",
                                  ratio=sigma, certified_bound=sigma,
                                  oracle_value=sigma,
                                  seconds=time.perf_counter() - t0))
    if oracle_value is not None:
        for row in rows:
            row.oracle_value = oracle_value
    return rows


def rho_rows(G, name, family, cap, trials, want_oracle) -> list[ReportRow]:
    rows = []
    t0 = time.perf_counter()
    lower = best_prefix_bound(G)
    bound = lower.bound if lower.certified else None
    if lower.certified:
        rows.append(ReportRow(name, family, G.n, "rho/lemma1-prefix",
                              certified_bound=bound,
                              seconds=time.perf_counter() - t0))
    t0 = time.perf_counter()
    closure = star_closure(G)
    recursive = randomized.star_recursive_strategy(closure, materialize=G.n <= 7)
    ratio = recursive.rho
    method = "rho/star-recursive"
    if recursive.mixed is not None:
        lifted = randomized.lift_star_strategy(G, recursive.mixed)
        ratio = mixed_payoffs(lifted).rho
        method = "rho/star-recursive-lift"
    rows.append(ReportRow(name, family, G.n, method, ratio=ratio,
                          certified_bound=bound,
                          seconds=time.perf_counter() - t0))
    rows.append(ReportRow(name, family, G.n, "rho/cap",
                          ratio=Fraction(G.n + 1, 2)))
    if G.is_tree or G.is_unweighted:
        t0 = time.perf_counter()
        est = randomized.deepening_ratio_estimate(G, trials, seed=0)
        rows.append(ReportRow(name, family, G.n, "rho/deepening-estimate",
                              ratio=est.rho_hat,
                              seconds=time.perf_counter() - t0))
    if want_oracle:
        t0 = time.perf_counter()
        sol = oracle.exact_rho(G, cap)
        rows.append(ReportRow(name, family, G.n, "rho/oracle",
                              ratio=sol.value, certified_bound=sol.value,
                              oracle_value=sol.value,
                              seconds=time.perf_counter() - t0))
        for row in rows:
            if row.method != "rho/deepening-estimate":
                row.oracle_value = sol.value
    return rows


def cmd_gen(args) -> int:
    G, _, _ = _load_instance(args)
    text = write_graph_text(G)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sigma(args) -> int:
    G, name, family = _load_instance(args)
    _emit(sigma_rows(G, name, family, args.cap, args.oracle, args.steiner), args)
    return 0


def cmd_rho_bounds(args) -> int:
    G, name, family = _load_instance(args)
    _emit(rho_rows(G, name, family, args.cap, args.trials, args.oracle), args)
    return 0


def cmd_oracle(args) -> int:
    G, name, family = _load_instance(args)
    t0 = time.perf_counter()
    sol = oracle.exact_rho(G, args.cap)
    elapsed = time.perf_counter() - t0
    row = ReportRow(name, family, G.n, "rho/oracle", ratio=sol.value,
                    certified_bound=sol.value, oracle_value=sol.value,
                    seconds=elapsed)
    _emit([row], args)
    if args.format == "text":
        print(f"  value = {sol.value} (~{float(sol.value):.12g})")
        print(f"  sigma = {sol.sigma} over {sol.search_count} searches")
        print(f"  certificate gap = {float(sol.certificate_gap):.3g} "
              f"({'exact' if sol.exact else 'float'})")
        hider = ", ".join(f"{G.label_of(v)}:{q}" for v, q in sol.col_mix)
        print(f"  hider optimal mix: {hider}")
        print(f"  searcher support size: {len(sol.row_mix)}")
    return 0


def cmd_reduce_sat(args) -> int:
    with open(args.cnf) as fh:
        formula = read_dimacs(fh.read())
    red = instances.sat_reduce(formula)
    lines = [f"# 3-SAT reduction: n={formula.n_vars} m={formula.n_clauses}",
             f"# threshold R = {red.threshold} (~{float(red.threshold):.12g})"]
    if red.degenerate_clauses:
        lines.append(f"# degenerate clauses (repeated literals): "
                     f"{list(red.degenerate_clauses)}")
    text = "\n".join(lines) + "\n" + write_graph_text(red.graph)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.witness is not None:
        bits = [int(b) for b in args.witness]
        result = instances.sat_witness_search(red, bits)
        status = "satisfies" if result.satisfied else "does NOT satisfy"
        print(f"# witness {args.witness} {status} the formula; "
              f"sigma_S = {result.sigma} (~{float(result.sigma):.6g}); "
              f"R = {red.threshold}; within threshold: "
              f"{result.sigma <= red.threshold}")
    return 0


def cmd_bench(args) -> int:
    if args.family is None:
        raise InvalidParamsError("bench needs --family")
    jobs = []
    for k in range(args.count):
        seed = args.seed + k
        params = {}
        for key in ("n", "lo", "hi", "p", "length"):
            value = getattr(args, key, None)
            if value is not None:
                params[key] = value
        G = instances.gen_instance(args.family, seed=seed, **params)
        jobs.append((G, f"{args.family}-s{seed}", seed))

    def run(job):
        G, name, _ = job
        rows = []
        try:
            rows.extend(sigma_rows(G, name, args.family, args.cap,
                                   args.oracle, args.steiner))
            rows.extend(rho_rows(G, name, args.family, args.cap,
                                 args.trials, args.oracle))
        except _CAP_ERRORS as exc:
            rows.append(ReportRow(name, args.family, G.n,
                                  f"error/{type(exc).__name__}"))
        return rows

    workers = max(1, int(os.environ.get("ES_THREADS", "1")))
    ordered = []
    if workers == 1:
        ordered = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            ordered = list(pool.map(run, jobs))
    rows = [row for group in ordered for row in group]
    sys.stdout.write(rows_to_csv(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expsearch",
        description="Expanding-search ratios: exact oracles, bounds, strategies.")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="generate an instance as graph text")
    _family_options(gen)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_gen)

    sigma = subs.add_parser("sigma", help="deterministic search ratio")
    _family_options(sigma)
    sigma.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    sigma.add_argument("--oracle", action="store_true",
                       help="run the brute-force oracle on weighted graphs")
    sigma.add_argument("--steiner", choices=("exact", "mst2"), default="exact")
    sigma.set_defaults(func=cmd_sigma)

    rho = subs.add_parser("rho-bounds",
                          help="lower/upper bounds on the randomized ratio")
    _family_options(rho)
    rho.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    rho.add_argument("--trials", type=int, default=10000)
    rho.add_argument("--oracle", action="store_true")
    rho.set_defaults(func=cmd_rho_bounds)

    orc = subs.add_parser("oracle", help="exact randomized search ratio")
    _family_options(orc)
    orc.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    orc.set_defaults(func=cmd_oracle)

    red = subs.add_parser("reduce-sat", help="build the 3-SAT hardness gadget")
    red.add_argument("cnf", help="DIMACS CNF file (3-CNF subset)")
    red.add_argument("-o", "--output")
    red.add_argument("--witness", help="bit string; emit its witness search ratio")
    red.set_defaults(func=cmd_reduce_sat)

    bench = subs.add_parser("bench", help="CSV report over generated instances")
    bench.add_argument("--family", required=True)
    bench.add_argument("--n", type=int)
    bench.add_argument("--lo", type=Fraction)
    bench.add_argument("--hi", type=Fraction)
    bench.add_argument("--p", type=float)
    bench.add_argument("--length", type=Fraction)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--count", type=int, default=1)
    bench.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    bench.add_argument("--trials", type=int, default=10000)
    bench.add_argument("--oracle", action="store_true")
    bench.add_argument("--steiner", choices=("exact", "mst2"), default="exact")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CAP_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ExpandingSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
