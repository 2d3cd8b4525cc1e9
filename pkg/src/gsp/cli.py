"""Command-line harness: instance generation, solving, and benchmarking.

Subcommands: ``gen``, ``solve``, ``qsolve``, ``brute``, ``birthday``,
``bench``, ``verify-bounds``.  All outputs are plain text; ``bench`` writes
one CSV row per (grid cell, seed, solver).  Exit codes: 0 success, 1
parameter error, 2 promise violation, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import math
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .algebra import DEFAULT_ENUMERATION_CAP, VectorP, is_prime
from .bounds import bound_report, det_query_bound, t1_count, t2_count
from .errors import GspError, ParameterError, PromiseViolationError, ResourceCapError
from .oracle import HiddenInstance, QueryLog, make_instance, read_instance, write_instance
from .qsim import DEFAULT_SIM_CAP, QCounter, dump_state_text, quantum_find_s
from .solvers import SolverResult, birthday_solve, brute_force_solve, choose_d, find_s

_SOLVER_ORDER = ("det", "brute", "birthday", "quantum")
_CSV_HEADER = ("p", "n", "k", "d", "solver", "seed", "queries", "recovered_ok", "bound", "wall_ms")

#: Oracle calls per recovered orthogonal-subgroup element, used as the
#: reference bound for quantum rows (the measured constant is 3).
QUANTUM_CALLS_PER_ROUND = 8


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        raise ParameterError(message)


def _add_instance_source(sub: argparse.ArgumentParser, file_only: bool = False) -> None:
    sub.add_argument("--in", dest="infile", help="instance file to read")
    if not file_only:
        sub.add_argument("--p", type=int)
        sub.add_argument("--n", type=int)
        sub.add_argument("--k", type=int)
        sub.add_argument("--seed", type=int, default=0, help="subgroup seed")
        sub.add_argument("--label-seed", type=int, default=None)
        sub.add_argument("--obfuscate", type=int, choices=(0, 1), default=0)


def _load_instance(args: argparse.Namespace) -> HiddenInstance:
    if args.infile:
        return read_instance(args.infile)
    if getattr(args, "p", None) is None:
        raise ParameterError("provide --in FILE or --p/--n/--k/--seed")
    label_seed = args.seed if args.label_seed is None else args.label_seed
    return make_instance(args.p, args.n, args.k, args.seed, label_seed, bool(args.obfuscate))


def _report(result: SolverResult, inst: HiddenInstance, bound: int, check: bool) -> int:
    print(f"recovered {result.recovered.to_text()}")
    if result.d_used is not None:
        print(f"d={result.d_used}")
    verdict = "PASS" if result.queries <= bound else "FAIL"
    print(f"queries={result.queries} bound={bound} queries<=bound {verdict}")
    if check:
        ok = result.recovered == inst.secret
        print(f"check {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.p is None or not is_prime(args.p):
        raise ParameterError("p must be prime")
    label_seed = args.seed if args.label_seed is None else args.label_seed
    inst = make_instance(args.p, args.n, args.k, args.seed, label_seed, bool(args.obfuscate))
    write_instance(inst, args.out)
    if args.reveal:
        print(f"secret {inst.secret.to_text()}")
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    d = choose_d(inst.p, inst.n, inst.k) if args.d is None else args.d
    log = QueryLog(inst, dedup=not args.strict_count)
    result = find_s(log, d)
    if args.trace:
        with open(args.trace, "w", encoding="ascii") as fh:
            for element, label in result.trace:
                fh.write(f"{element.digits()} {label.digits()}\n")
    return _report(result, inst, det_query_bound(inst.p, inst.n, inst.k, d), args.check)


def _cmd_qsolve(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    counter = QCounter()
    result, final_state = quantum_find_s(inst, counter, return_final_state=True)
    if args.dump_state:
        with open(args.dump_state, "w", encoding="ascii") as fh:
            fh.write(dump_state_text(final_state))
    bound = QUANTUM_CALLS_PER_ROUND * (inst.n - inst.k)
    print(f"recovered {result.recovered.to_text()}")
    print(f"oracle_calls={result.queries} bound={bound} "
          f"calls<=bound {'PASS' if result.queries <= bound else 'FAIL'}")
    if args.check:
        ok = result.recovered == inst.secret
        print(f"check {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    return 0


def _cmd_brute(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    log = QueryLog(inst, dedup=not args.strict_count)
    result = brute_force_solve(log)
    return _report(result, inst, inst.p**inst.n, args.check)


def _cmd_birthday(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    log = QueryLog(inst, dedup=not args.strict_count)
    result = birthday_solve(log, args.sample_seed, args.multiplier)
    success = result.recovered.rank == inst.k
    print(f"recovered {result.recovered.to_text()}")
    print(f"queries={result.queries} {'success' if success else 'failure'}")
    return 0


def _parse_int_list(text: str) -> list[int]:
    """Comma list and/or a..b ranges: "3,5" or "3..8" or "2,4..6"."""
    out: list[int] = []
    for tok in text.split(","):
        tok = tok.strip()
        if ".." in tok:
            lo, hi = tok.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif tok:
            out.append(int(tok))
    return out


def _bench_cell(task: tuple) -> list[tuple]:
    """Rows for one (p, n, k, seed); runs in a worker process."""
    p, n, k, seed, solvers, d_arg, obfuscate, multiplier = task
    inst = make_instance(p, n, k, seed, seed, obfuscate)
    rows = []
    for solver in solvers:
        d: int | None = None
        t0 = time.perf_counter()
        try:
            if solver == "det":
                if p**n > DEFAULT_ENUMERATION_CAP:
                    raise ResourceCapError(
                        f"p^n = {p**n} exceeds enumeration cap {DEFAULT_ENUMERATION_CAP}"
                    )
                d = choose_d(p, n, k) if d_arg is None else d_arg
                result = find_s(QueryLog(inst), d)
                bound = det_query_bound(p, n, k, d)
            elif solver == "brute":
                result = brute_force_solve(QueryLog(inst))
                bound = p**n
            elif solver == "birthday":
                result = birthday_solve(QueryLog(inst), seed, multiplier)
                bound = math.ceil(multiplier * math.sqrt(k * p ** (n - k)))
            else:
                result = quantum_find_s(inst)
                bound = QUANTUM_CALLS_PER_ROUND * (n - k)
        except ResourceCapError as exc:
            rows.append(("skip", p, n, k, solver, seed, str(exc)))
            continue
        wall_ms = (time.perf_counter() - t0) * 1e3
        ok = result.recovered == inst.secret
        rows.append(
            (
                "row",
                p,
                n,
                k,
                "" if d is None else d,
                solver,
                seed,
                result.queries,
                ok,
                bound,
                f"{wall_ms:.3f}",
            )
        )
    return rows


def _cmd_bench(args: argparse.Namespace) -> int:
    ps = _parse_int_list(args.p)
    ns = _parse_int_list(args.n)
    for p in ps:
        if not is_prime(p):
            raise ParameterError(f"p must be prime, got {p}")
    solvers = list(_SOLVER_ORDER) if args.solver == "all" else [args.solver]
    tasks = []
    for p in ps:
        for n in ns:
            ks = range(1, n) if args.k == "all" else _parse_int_list(args.k)
            for k in ks:
                if not 1 <= k < n:
                    continue
                for seed in range(args.seeds):
                    tasks.append(
                        (p, n, k, seed, tuple(solvers), args.d, bool(args.obfuscate), args.multiplier)
                    )
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_cell, tasks))
    else:
        results = [_bench_cell(t) for t in tasks]

    per_cell: dict[tuple, list[tuple[int, int]]] = {}
    with open(args.out, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_HEADER)
        for rows in results:
            for row in rows:
                if row[0] == "skip":
                    _, p, n, k, solver, seed, why = row
                    print(f"warning: skipped p={p} n={n} k={k} solver={solver} seed={seed}: {why}",
                          file=sys.stderr)
                    continue
                _, p, n, k, d, solver, seed, queries, ok, bound, wall = row
                writer.writerow((p, n, k, d, solver, seed, queries, ok, bound, wall))
                per_cell.setdefault((p, n, k, solver), []).append((queries, bound))
    for (p, n, k, solver), samples in per_cell.items():
        qs = [q for q, _ in samples]
        ratio = max(q / b for q, b in samples)
        print(
            f"cell p={p} n={n} k={k} solver={solver}: "
            f"max_queries={max(qs)} mean_queries={statistics.fmean(qs):.2f} "
            f"max(queries)/bound={ratio:.3f}"
        )
    return 0


def _cmd_verify_bounds(args: argparse.Namespace) -> int:
    ps = _parse_int_list(args.p)
    ns = _parse_int_list(args.n)
    print("p n k t1 t2 lower_adaptive lower_nonadaptive upper_det check")
    failed = False
    for p in ps:
        if not is_prime(p):
            raise ParameterError(f"p must be prime, got {p}")
        for n in ns:
            ks = range(1, n) if args.k == "all" else _parse_int_list(args.k)
            for k in ks:
                if not 1 <= k < n:
                    continue
                rep = bound_report(p, n, k)
                identity_ok = rep.t1 * (p**k - 1) == rep.t2 * (p**n - 1)
                if p**n <= args.enum_cap and rep.t1 <= 20000:
                    from .algebra import enumerate_subgroups

                    subs = list(enumerate_subgroups(p, n, k))
                    e = VectorP.from_index(p, n, 1)
                    t2_brute = sum(1 for h in subs if h.contains(e))
                    enum_ok = len(subs) == rep.t1 and t2_brute == rep.t2
                    verdict = "pass" if (identity_ok and enum_ok) else "FAIL"
                else:
                    verdict = "pass(identity-only)" if identity_ok else "FAIL"
                failed = failed or verdict == "FAIL"
                print(
                    f"{p} {n} {k} {rep.t1} {rep.t2} "
                    f"{rep.lower_adaptive:.3f} {rep.lower_nonadaptive:.3f} "
                    f"{rep.upper_det} {verdict}"
                )
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--label-seed", type=int, default=None)
    gen.add_argument("--obfuscate", type=int, choices=(0, 1), default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--reveal", action="store_true", help="print the secret")
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="run the deterministic solver")
    _add_instance_source(solve)
    solve.add_argument("--d", type=int, default=None, help="override the default split")
    solve.add_argument("--check", action="store_true")
    solve.add_argument("--strict-count", action="store_true")
    solve.add_argument("--trace", help="write the query trace to a file")
    solve.set_defaults(func=_cmd_solve)

    qsolve = sub.add_parser("qsolve", help="run the exact quantum solver")
    _add_instance_source(qsolve)
    qsolve.add_argument("--check", action="store_true")
    qsolve.add_argument("--dump-state", help="write the final pre-measurement state")
    qsolve.set_defaults(func=_cmd_qsolve)

    brute = sub.add_parser("brute", help="query everything (correctness oracle)")
    _add_instance_source(brute)
    brute.add_argument("--check", action="store_true")
    brute.add_argument("--strict-count", action="store_true")
    brute.set_defaults(func=_cmd_brute)

    birthday = sub.add_parser("birthday", help="randomized collision baseline")
    _add_instance_source(birthday)
    birthday.add_argument("--sample-seed", type=int, default=0)
    birthday.add_argument("--multiplier", type=float, default=8.0)
    birthday.add_argument("--strict-count", action="store_true")
    birthday.set_defaults(func=_cmd_birthday)

    bench = sub.add_parser("bench", help="grid benchmark to CSV")
    bench.add_argument("--p", required=True, help="e.g. 2,3")
    bench.add_argument("--n", required=True, help="e.g. 3..8")
    bench.add_argument("--k", default="all", help="comma list or 'all'")
    bench.add_argument("--d", type=int, default=None)
    bench.add_argument("--solver", choices=_SOLVER_ORDER + ("all",), default="det")
    bench.add_argument("--seeds", type=int, default=20)
    bench.add_argument("--obfuscate", type=int, choices=(0, 1), default=0)
    bench.add_argument("--multiplier", type=float, default=8.0)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--out", required=True)
    bench.set_defaults(func=_cmd_bench)

    verify = sub.add_parser("verify-bounds", help="counting formulas vs enumeration")
    verify.add_argument("--p", required=True)
    verify.add_argument("--n", required=True)
    verify.add_argument("--k", default="all")
    verify.add_argument("--enum-cap", type=int, default=4096)
    verify.set_defaults(func=_cmd_verify_bounds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PromiseViolationError as exc:
        print(f"promise violation: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except GspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
