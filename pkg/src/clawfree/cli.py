"""Command-line entry point: ``clawfree <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from decimal import Context, Decimal
from fractions import Fraction
from pathlib import Path

from . import analysis, generators, oracle
from .formats import (
    ParseError,
    comment_field,
    detect_format,
    format_weight,
    parse_graph,
    parse_set_system,
    serialize_graph,
    serialize_set_system,
)
from .graph_core import InputError, ProblemInstance
from .scaling import ScalingConfig, solve_scaled
from .search import PivotRule, SearchConfig, Solution, Strategy, Trace, greedy, run_local_search
from .setpacking import SetSystem, conflict_graph, lift_solution

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CLI_MAX_ITERATIONS = 10**6


def decimal_string(x: Fraction, digits: int = 20) -> str:
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


@dataclass
class RunRecord:
    instance: dict
    algorithm: str
    config: dict
    solution: list[int]
    weight: str
    weight_decimal: str
    iterations: int
    certificate: str
    wall_time_s: float | None = None
    oracle_ratio: str | None = None
    oracle_weight: str | None = None
    sets: list[int] | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


# -- loading ---------------------------------------------------------------------------


@dataclass
class Loaded:
    text: str
    instance: ProblemInstance
    system: SetSystem | None
    descriptor: dict


def load_instance(path: str) -> Loaded:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    kind = detect_format(text)
    descriptor = {"path": path, "format": kind}
    params = comment_field(text, "generator")
    if params:
        descriptor["generator"] = " ".join(params)
    if kind == "setpack":
        system = parse_set_system(text)
        return Loaded(text, conflict_graph(system), system, descriptor)
    return Loaded(text, parse_graph(text), None, descriptor)


def load_solution_vertices(path: str) -> list[int]:
    """Vertex ids from a JSON run record (``solution`` key) or a whitespace-separated list."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            return [int(t) for t in text.split()]
        except ValueError:
            raise ParseError(None, f"{path}: expected a run record or vertex ids") from None
    if isinstance(data, dict):
        return [int(v) for v in data["solution"]]
    return [int(v) for v in data]


def _warm_start(args, loaded: Loaded) -> list[int]:
    if args.warm_start == "empty":
        return []
    if args.warm_start == "a-side":
        ids = comment_field(loaded.text, "a-side")
        if ids is None:
            raise ParseError(None, "--warm-start a-side needs a 'c a-side ...' comment in the instance")
        return [int(t) for t in ids]
    if not args.warm_start_path:
        raise InputError("--warm-start file needs --warm-start-path")
    return load_solution_vertices(args.warm_start_path)


# -- commands --------------------------------------------------------------------------


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        strategy=Strategy.CLAW_ONLY if args.algorithm == "squareimp" else Strategy.BOUNDED,
        size_bound=args.size_bound,
        pivot=PivotRule.FIRST if args.pivot == "first" else PivotRule.BEST,
        max_iterations=args.max_iterations,
        threads=args.threads,
    )


def solve_record(args, loaded: Loaded) -> RunRecord:
    inst = loaded.instance
    started = time.perf_counter()
    extra: dict = {}
    config = {
        "size_bound": args.size_bound if args.size_bound is not None else (inst.d - 1) ** 2 + (inst.d - 1),
        "pivot": args.pivot,
        "scale_N": args.scale_N,
        "warm_start": args.warm_start,
        "max_iterations": args.max_iterations,
        "seed": args.seed,
    }
    if args.algorithm == "greedy":
        sol, trace = greedy(inst), Trace()
        certificate = "not-applicable"
    elif args.scale_N is not None:
        if args.warm_start != "empty":
            raise InputError("--scale-N runs always start from the empty set")
        sol, trace, stats = solve_scaled(inst, ScalingConfig(Fraction(args.scale_N)), _search_config(args))
        certificate = trace.certificate
        extra["scaling"] = {
            "factor": format_weight(stats.factor),
            "iteration_bound": stats.iteration_bound,
            "loss_factor": format_weight(stats.loss_factor),
            "deleted": stats.deleted,
        }
    else:
        sol, trace = run_local_search(inst, _search_config(args), _warm_start(args, loaded))
        certificate = trace.certificate
    elapsed = time.perf_counter() - started
    record = RunRecord(
        instance=loaded.descriptor,
        algorithm=args.algorithm,
        config=config,
        solution=sol.vertices,
        weight=format_weight(sol.weight),
        weight_decimal=decimal_string(sol.weight),
        iterations=trace.iterations,
        certificate=certificate,
        wall_time_s=round(elapsed, 6) if args.timing else None,
        extra=extra,
    )
    if loaded.system is not None:
        record.sets = lift_solution(loaded.system, sol)
    if args.oracle:
        opt = oracle.exact_mwis(inst)
        record.oracle_weight = format_weight(opt.weight)
        record.oracle_ratio = format_weight(opt.weight / sol.weight) if sol.weight else None
    return record


def cmd_solve(args) -> int:
    record = solve_record(args, load_instance(args.instance))
    _emit(args.out, record.to_json())
    return EXIT_OK


def cmd_oracle(args) -> int:
    loaded = load_instance(args.instance)
    res = oracle.exact_mwis(loaded.instance, cap=args.cap)
    out = {
        "instance": loaded.descriptor,
        "solution": res.optimum.vertices,
        "weight": format_weight(res.weight),
        "weight_decimal": decimal_string(res.weight),
        "nodes": res.nodes,
    }
    if loaded.system is not None:
        out["sets"] = lift_solution(loaded.system, res.optimum)
    _emit(args.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    loaded = load_instance(args.instance)
    inst = loaded.instance
    sol = Solution.of(inst, load_solution_vertices(args.solution))
    bound = args.size_bound if args.size_bound is not None else (inst.d - 1) ** 2 + (inst.d - 1)
    found = oracle.exhaustive_improvement(inst, sol.A, bound, bound_cap=max(bound, oracle.DEFAULT_ENUM_BOUND))
    ok = found is None and sol.is_maximal()
    out = {
        "solution": sol.vertices,
        "size_bound": bound,
        "maximal": sol.is_maximal(),
        "improvement": sorted(found) if found is not None else None,
        "locally_optimal": ok,
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


def _fmap(d: dict) -> dict:
    return {str(k): format_weight(v) for k, v in d.items()}


def cmd_analyze(args) -> int:
    loaded = load_instance(args.instance)
    inst = loaded.instance
    A = load_solution_vertices(args.solution)
    Astar = load_solution_vertices(args.reference) if args.reference else oracle.exact_mwis(inst).optimum.A
    eps, delta = Fraction(args.epsilon), Fraction(args.delta)
    terminated = args.terminated
    charges = analysis.compute_charges(inst, A, Astar)
    contributions = analysis.compute_contributions(inst, A, Astar)
    cls = analysis.classify(inst, A, Astar, eps, delta, terminated=terminated)
    bound_ok = analysis.verify_charge_bound(charges)
    out = {
        "A": sorted(charges.A),
        "A_star": sorted(charges.Astar),
        "n": {str(u): v for u, v in charges.n.items()},
        "charge": _fmap(charges.charge),
        "T": {str(v): sorted(T) for v, T in charges.T.items()},
        "received_charge": _fmap(charges.received),
        "charge_bound_ok": {str(v): ok for v, ok in bound_ok.items()},
        "decomposition": format_weight(charges.decomposition),
        "optimum_weight": format_weight(charges.optimum_weight),
        "contribution": {f"{u},{v}": format_weight(c) for (u, v), c in contributions.contr.items()},
        "contribution_upper_ok": {str(v): ok for v, ok in contributions.upper_ok.items()},
        "contribution_lower_ok": {str(u): ok for u, ok in contributions.lower_ok.items()},
        "classification": {
            "epsilon": format_weight(eps),
            "delta": format_weight(delta),
            "P": sorted(cls.P),
            "labels": {str(u): lab.label for u, lab in cls.labels.items()},
            "B_bar": sorted(cls.B_bar),
            "C": sorted(cls.C),
            "D": sorted(cls.D),
            "B": sorted(cls.B),
            "B_star": sorted(cls.B_star),
            "t": {str(v): u for v, u in cls.t.items()},
            "lemma_checks": cls.lemma_checks,
        },
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    if not terminated:
        return EXIT_OK
    failures = [not all(bound_ok.values()), not all(contributions.upper_ok.values()),
                not all(contributions.lower_ok.values()), not all(cls.lemma_checks.values())]
    return EXIT_FAIL if any(failures) else EXIT_OK


def cmd_check_constants(args) -> int:
    eps, delta = Fraction(args.epsilon), Fraction(args.delta)
    all_ok = True
    for d in range(args.d_min, args.d_max + 1):
        rep = analysis.verify_constants(eps, delta, d)
        all_ok &= rep.all_pass
        verdicts = " ".join(
            f"{name}:{'pass' if ok else 'FAIL' if ok is False else 'undecided'}"
            for name, ok in rep.results.items()
        )
        mode = "exact" if rep.exact else "interval"
        print(f"d={d} {rep.passed}/11 pass [{mode}] {verdicts}")
        print(f"  epsilon*delta = {format_weight(rep.epsilon_delta)}; "
              f"guarantee d/2 - epsilon*delta/2 = {format_weight(rep.guarantee)}")
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_reduce(args) -> int:
    text = Path(args.instance).read_text() if args.instance != "-" else sys.stdin.read()
    system = parse_set_system(text)
    inst = conflict_graph(system)
    comments = [f"conflict graph of {args.instance} (k={system.k}, d={inst.d})"]
    _emit(args.out, serialize_graph(inst, comments))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "tight":
        t = generators.berman_tight(args.d, Fraction(args.weight))
        comments = [
            f"generator tight d={args.d} weight={args.weight}",
            "a-side " + " ".join(map(str, sorted(t.a_side))),
            "b-side " + " ".join(map(str, sorted(t.b_side))),
        ]
        text = serialize_graph(t.instance, comments)
    elif args.family == "setpack":
        system = generators.random_set_packing(
            args.num_sets, args.universe, args.k, (args.wmin, args.wmax), args.seed, args.denominator
        )
        comments = [f"generator setpack num_sets={args.num_sets} universe={args.universe} k={args.k} "
                    f"weights={args.wmin}..{args.wmax}/{args.denominator} seed={args.seed}"]
        text = serialize_set_system(system, comments)
    elif args.family == "cliques":
        sizes = [int(s) for s in args.sizes.split(",")]
        inst = generators.clique_union(sizes, (args.wmin, args.wmax), args.seed, args.denominator)
        comments = [f"generator cliques sizes={args.sizes} weights={args.wmin}..{args.wmax}/"
                    f"{args.denominator} seed={args.seed}"]
        text = serialize_graph(inst, comments)
    else:
        outcome = generators.random_claw_free(
            args.n, args.p, args.d, args.seed, args.max_attempts, (args.wmin, args.wmax), args.denominator
        )
        if not outcome.ok:
            print(f"no {args.d}-claw free graph within {outcome.attempts} attempts", file=sys.stderr)
            return EXIT_FAIL
        comments = [f"generator clawfree n={args.n} p={args.p} d={args.d} weights={args.wmin}..{args.wmax}/"
                    f"{args.denominator} seed={args.seed} attempts={outcome.attempts}"]
        text = serialize_graph(outcome.instance, comments)
    _emit(args.out, text)
    return EXIT_OK


BENCH_COLUMNS = ["instance", "n", "m", "d", "algorithm", "weight", "weight_decimal",
                 "iterations", "certificate", "oracle_weight", "ratio"]


def _bench_instances(args):
    for i in range(args.count):
        seed = args.seed + i
        if args.family == "setpack":
            system = generators.random_set_packing(args.num_sets, args.universe, args.k,
                                                   (args.wmin, args.wmax), seed)
            yield f"setpack-{seed}", conflict_graph(system)
        elif args.family == "cliques":
            yield f"cliques-{seed}", generators.clique_union([3, 2, 4, 1], (args.wmin, args.wmax), seed)
        elif args.family == "tight":
            d = 3 + i
            yield f"tight-{d}", generators.berman_tight(d).instance
        else:
            outcome = generators.random_claw_free(args.n, args.p, args.d, seed, args.max_attempts,
                                                  (args.wmin, args.wmax))
            if outcome.ok:
                yield f"clawfree-{seed}", outcome.instance


def cmd_bench(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    algorithms = args.algorithms.split(",")
    for name, inst in _bench_instances(args):
        opt = oracle.exact_mwis(inst).weight if args.oracle else None
        for alg in algorithms:
            if alg == "greedy":
                sol, trace, cert = greedy(inst), Trace(), "not-applicable"
            elif alg in ("squareimp", "bounded"):
                cfg = SearchConfig(Strategy.CLAW_ONLY if alg == "squareimp" else Strategy.BOUNDED,
                                   max_iterations=args.max_iterations)
                sol, trace = run_local_search(inst, cfg)
                cert = trace.certificate
            else:
                raise InputError(f"unknown algorithm {alg!r}")
            writer.writerow([
                name, inst.n, inst.num_edges, inst.d, alg, format_weight(sol.weight),
                decimal_string(sol.weight), trace.iterations, cert,
                format_weight(opt) if opt is not None else "",
                format_weight(opt / sol.weight) if opt is not None and sol.weight else "",
            ])
    _emit(args.out, buf.getvalue())
    return EXIT_OK


def _emit(path: str | None, text: str) -> None:
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- argument parsing ------------------------------------------------------------------


def _add_weight_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wmin", type=int, default=1)
    p.add_argument("--wmax", type=int, default=10)
    p.add_argument("--denominator", type=int, default=1, help="weights are multiples of 1/denominator")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clawfree", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run greedy, SquareImp or bounded local search")
    p.add_argument("instance", help="graph or set-system file ('-' for stdin)")
    p.add_argument("--algorithm", choices=["greedy", "squareimp", "bounded"], default="bounded")
    p.add_argument("--size-bound", type=int, default=None)
    p.add_argument("--pivot", choices=["first", "best"], default="first")
    p.add_argument("--scale-N", dest="scale_N", type=str, default=None,
                   help="scale-and-truncate with this N > 1 (rational)")
    p.add_argument("--warm-start", choices=["empty", "a-side", "file"], default="empty")
    p.add_argument("--warm-start-path", default=None)
    p.add_argument("--seed", type=int, default=None, help="echoed into the record")
    p.add_argument("--oracle", action="store_true", help="attach the exact optimum and ratio")
    p.add_argument("--max-iterations", type=int, default=CLI_MAX_ITERATIONS)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical output)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact maximum-weight independent set")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_MWIS_CAP)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-local-opt", help="exhaustively confirm no bounded improvement exists")
    p.add_argument("instance")
    p.add_argument("--solution", required=True, help="run record JSON or vertex id list")
    p.add_argument("--size-bound", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="charges, contributions and classification against an optimum")
    p.add_argument("instance")
    p.add_argument("--solution", required=True)
    p.add_argument("--reference", default=None, help="reference set A* (default: oracle optimum)")
    p.add_argument("--epsilon", default=str(analysis.DEFAULT_EPSILON))
    p.add_argument("--delta", default=str(analysis.DEFAULT_DELTA))
    p.add_argument("--terminated", action="store_true",
                   help="solution is locally optimal; enforce the inequality checks")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check-constants", help="verify the analysis constants in exact arithmetic")
    p.add_argument("--epsilon", default=str(analysis.DEFAULT_EPSILON))
    p.add_argument("--delta", default=str(analysis.DEFAULT_DELTA))
    p.add_argument("--d-min", type=int, default=3)
    p.add_argument("--d-max", type=int, default=10)
    p.set_defaults(func=cmd_check_constants)

    p = sub.add_parser("reduce", help="set system -> conflict graph")
    p.add_argument("instance")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="emit a generated instance")
    p.add_argument("family", choices=["tight", "setpack", "cliques", "clawfree"])
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--weight", default="1")
    p.add_argument("--num-sets", type=int, default=12)
    p.add_argument("--universe", type=int, default=9)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--sizes", default="3,2")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--max-attempts", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_weight_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="CSV sweep over seeded instances")
    p.add_argument("--family", choices=["setpack", "cliques", "tight", "clawfree"], default="setpack")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algorithms", default="greedy,squareimp,bounded")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--num-sets", type=int, default=12)
    p.add_argument("--universe", type=int, default=9)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--max-attempts", type=int, default=1000)
    p.add_argument("--max-iterations", type=int, default=CLI_MAX_ITERATIONS)
    _add_weight_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.verbose:
        import logging

        logging.basicConfig(level=logging.DEBUG)
    try:
        return args.func(args)
    except (InputError, OSError, KeyError, ValueError) as exc:
        print(f"clawfree {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
