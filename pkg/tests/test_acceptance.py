"""Acceptance suite: one PASS/FAIL line per criterion (run with ``pytest -s`` to see them)."""

import time
from fractions import Fraction

import pytest

from clawfree.analysis import (
    DEFAULT_DELTA,
    DEFAULT_EPSILON,
    compute_charges,
    compute_contributions,
    verify_charge_bound,
    verify_constants,
)
from clawfree.cli import main
from clawfree.formats import serialize_graph, serialize_set_system
from clawfree.generators import berman_tight, clique_union, random_claw_free, random_set_packing
from clawfree.oracle import exact_mwis, exhaustive_improvement
from clawfree.scaling import ScalingConfig, iteration_bound, solve_scaled
from clawfree.search import SearchConfig, Strategy, find_bounded_improvement, greedy, run_local_search
from clawfree.setpacking import conflict_graph

F = Fraction
NUM_SETPACK = 200


def report(num: int, ok: bool, detail: str) -> None:
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def setpack_runs():
    """Bounded search plus oracle on seeded k=3 set-packing instances (<= 16 sets)."""
    started = time.perf_counter()
    runs = []
    for seed in range(NUM_SETPACK):
        num_sets = 8 + seed % 9  # 8..16
        sys = random_set_packing(num_sets, 10, 3, (1, 12), seed, denominator=1 + seed % 3)
        inst = conflict_graph(sys)
        sol, trace = run_local_search(inst)
        runs.append((inst, sol, trace, exact_mwis(inst)))
    return runs, time.perf_counter() - started


@pytest.fixture(scope="module")
def claw_free_graphs():
    graphs = []
    seed = 0
    while len(graphs) < 50:
        n = 8 + seed % 7  # 8..14
        out = random_claw_free(n, 0.35, 4, seed=seed, max_attempts=5000, denominator=2)
        if out.ok:
            graphs.append(out.instance)
        seed += 1
    return graphs


def test_criterion_1_tight_instance():
    started = time.perf_counter()
    failures = []
    for d in (4, 5, 6):
        t = berman_tight(d)
        opt = exact_mwis(t.instance).weight
        sol, trace = run_local_search(t.instance, SearchConfig(Strategy.CLAW_ONLY), t.a_side)
        if trace.iterations != 0 or opt / sol.weight != F(d, 2):
            failures.append(f"d={d} claw-only: {trace.iterations} iterations, ratio {opt / sol.weight}")
        if find_bounded_improvement(t.instance, t.a_side) is None:
            failures.append(f"d={d}: bounded search finds no improvement at the A-side")
        sol, trace = run_local_search(t.instance, SearchConfig(), t.a_side)
        if opt / sol.weight != 1 or not trace.locally_optimal:
            failures.append(f"d={d} bounded: ratio {opt / sol.weight}")
    elapsed = time.perf_counter() - started
    if elapsed >= 10:
        failures.append(f"runtime {elapsed:.2f}s")
    report(1, not failures, "; ".join(failures) or f"d=4,5,6 ratios d/2 then 1 in {elapsed:.2f}s")


def test_criterion_2_guarantee(setpack_runs):
    runs, elapsed = setpack_runs
    bad = [i for i, (inst, sol, _, opt) in enumerate(runs) if opt.weight > 2 * sol.weight]
    worst = max(opt.weight / sol.weight for _, sol, _, opt in runs)
    ok = not bad and len(runs) >= 200 and elapsed < 300
    report(2, ok, f"{len(runs)} instances, {len(bad)} violations, worst ratio {worst} "
                  f"({float(worst):.4f}), {elapsed:.1f}s")


def test_criterion_3_cross_validation(setpack_runs, claw_free_graphs):
    checks = disagreements = found = 0
    cases = [(inst, sol.A) for inst, sol, _, _ in setpack_runs[0]]
    cases += [(inst, run_local_search(inst)[0].A) for inst in claw_free_graphs]
    for inst, final in cases:
        bound = (inst.d - 1) ** 2 + (inst.d - 1)
        for A in (final, greedy(inst).A, frozenset()):
            ours = find_bounded_improvement(inst, A, bound) is None
            theirs = exhaustive_improvement(inst, A, bound) is None
            checks += 1
            disagreements += ours != theirs
            found += not theirs
    report(3, disagreements == 0,
           f"{len(cases)} instances, {checks} checks ({found} with an improvement), {disagreements} disagreements")


def test_criterion_4_charges_and_contributions(setpack_runs):
    failures = checked = 0
    for inst, sol, _, opt in setpack_runs[0]:
        charges = compute_charges(inst, sol, opt.optimum)
        contr = compute_contributions(inst, sol, opt.optimum)
        failures += sum(not ok for ok in verify_charge_bound(charges).values())
        failures += sum(not ok for ok in contr.upper_ok.values())
        for u, c in charges.charge.items():
            if c > 0:
                checked += 1
                failures += contr.value(u, charges.n[u]) < 2 * c
    report(4, failures == 0, f"{len(setpack_runs[0])} runs, {checked} positive charges, {failures} failures")


def test_criterion_5_constants():
    started = time.perf_counter()
    failed = []
    for d in range(3, 11):
        rep = verify_constants(DEFAULT_EPSILON, DEFAULT_DELTA, d)
        if not (rep.exact and rep.all_pass):
            failed.append(d)
        if rep.guarantee != F(d, 2) - F(1, 63_700_992):
            failed.append(f"guarantee d={d}")
    elapsed = time.perf_counter() - started
    ok = not failed and elapsed < 1
    report(5, ok, f"11/11 inequalities exact for d=3..10, eps*delta/2 = 1/63700992, {elapsed:.3f}s"
                  if ok else f"failed {failed}, {elapsed:.3f}s")


def test_criterion_6_iteration_bound():
    cfg = ScalingConfig(F(2))
    violations = runs = 0
    max_used = 0.0
    for seed in range(50):
        if seed % 2:
            inst = conflict_graph(random_set_packing(10 + seed % 11, 12, 3, (1, 50), seed, denominator=7))
        else:
            inst, sub = None, seed
            while inst is None:
                inst = random_claw_free(10 + seed % 5, 0.3, 4, seed=sub, max_attempts=5000,
                                        weight_range=(1, 50), denominator=3).instance
                sub += 1000
        assert inst.n <= 20
        _, trace, stats = solve_scaled(inst, cfg)
        runs += 1
        bound = iteration_bound(inst.d, cfg.N, inst.n)
        pots = stats.potentials
        violations += stats.iterations > bound
        violations += any(int(p) != p for p in pots)
        violations += any(b <= a for a, b in zip(pots, pots[1:]))
        max_used = max(max_used, stats.iterations / bound if bound else 0)
    report(6, violations == 0, f"{runs} scaled runs, {violations} violations, "
                               f"max iterations/bound {max_used:.5f}")


def test_criterion_7_cliques():
    mismatches = 0
    for seed in range(100):
        sizes = [1 + (seed * 7 + i) % 5 for i in range(2 + seed % 4)]
        inst = clique_union(sizes, (1, 6), seed)
        sol, _ = run_local_search(inst)
        expected, start = set(), 0
        for s in sizes:
            expected.add(min(range(start, start + s), key=lambda v: (-inst.weights[v], v)))
            start += s
        opt = exact_mwis(inst)
        mismatches += sol.A != expected or sol.weight != opt.weight or opt.optimum.A != expected
    report(7, mismatches == 0, f"100 clique unions, {mismatches} mismatches")


def test_criterion_8_determinism(tmp_path):
    files = []
    t = tmp_path / "tight.mwis"
    t.write_text(serialize_graph(berman_tight(5).instance, ["a-side 0 1 2 3"]))
    files.append((t, ["--warm-start", "a-side"]))
    s = tmp_path / "sp.txt"
    s.write_text(serialize_set_system(random_set_packing(14, 9, 3, (1, 9), 11, denominator=2)))
    files.append((s, ["--oracle"]))
    c = tmp_path / "cf.mwis"
    c.write_text(serialize_graph(random_claw_free(14, 0.3, 4, seed=5, max_attempts=5000).instance))
    files.append((c, ["--pivot", "best", "--seed", "5"]))
    differing = []
    for path, flags in files:
        outputs = set()
        for rep in range(2):
            for threads in (1, 4):
                out = tmp_path / f"out-{path.stem}-{rep}-{threads}.json"
                code = main(["solve", str(path), "--threads", str(threads), "--out", str(out)] + flags)
                assert code == 0
                outputs.add(out.read_bytes())
        if len(outputs) != 1:
            differing.append(path.name)
    report(8, not differing, f"{len(files)} instances x 2 repeats x threads {{1,4}}: "
                             f"{'byte-identical' if not differing else 'differ: ' + ', '.join(differing)}")
