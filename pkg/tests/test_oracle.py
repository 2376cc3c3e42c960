from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings

from clawfree.generators import berman_tight, tight_vertex
from clawfree.graph_core import ProblemInstance, is_independent
from clawfree.oracle import OracleRefused, exact_mwis, exhaustive_improvement, independent_sets, ratio
from clawfree.search import SearchConfig, Solution, run_local_search

from conftest import small_instances


def subset_max(inst):
    """All 2^n subsets; lexicographically least maximizer."""
    best, best_set = Fraction(-1), None
    for r in range(inst.n + 1):
        for S in combinations(range(inst.n), r):
            if is_independent(inst, S):
                w = sum((inst.weights[v] for v in S), Fraction(0))
                if w > best or (w == best and S < best_set):
                    best, best_set = w, S
    return best, frozenset(best_set)


def test_single_vertex():
    inst = ProblemInstance.from_edges([7], [], 2)
    res = exact_mwis(inst)
    assert res.optimum.A == {0} and res.weight == 7


def test_path(path_232):
    res = exact_mwis(path_232)
    assert res.optimum.A == {0, 2} and res.weight == 4


def test_tight_d6():
    t = berman_tight(6)
    res = exact_mwis(t.instance)
    assert res.optimum.A == t.b_side and res.weight == 15
    assert ratio(t.instance, Solution.of(t.instance, t.a_side)) == 3


def test_cap():
    with pytest.raises(OracleRefused):
        exact_mwis(ProblemInstance.from_edges([1] * 5, [], 2), cap=4)
    with pytest.raises(OracleRefused):
        exhaustive_improvement(ProblemInstance.from_edges([1] * 5, [], 2), set(), 13)


@settings(max_examples=80, deadline=None)
@given(small_instances(max_n=11))
def test_exact_mwis_matches_subset_enumeration(inst):
    w, S = subset_max(inst)
    res = exact_mwis(inst)
    assert res.weight == max(w, Fraction(0))
    if inst.n:
        assert res.optimum.A == S


@settings(max_examples=40, deadline=None)
@given(small_instances(max_n=10))
def test_unit_weight_optimum_is_locally_optimal(inst):
    # with unit weights an improvement would be a larger independent set
    inst = ProblemInstance(inst.n, inst.adjacency, tuple(Fraction(1) for _ in range(inst.n)), inst.d)
    opt = exact_mwis(inst).optimum
    assert exhaustive_improvement(inst, opt.A, min(6, max(inst.n, 1))) is None


def test_weighted_optimum_need_not_be_locally_optimal():
    # w: 5/3 against 1 + 1 = 2, but 25/9 > 1 + 1 in squares
    inst = ProblemInstance.from_edges([Fraction(5, 3), 1, 1], [(0, 1), (0, 2)], 3)
    opt = exact_mwis(inst).optimum
    assert opt.A == {1, 2}
    assert exhaustive_improvement(inst, opt.A, 1) == {0}


def test_independent_sets_counts():
    # path on 4 vertices has 8 independent sets (Fibonacci)
    inst = ProblemInstance.from_edges([1] * 4, [(0, 1), (1, 2), (2, 3)], 2)
    assert len(list(independent_sets(inst, 4))) == 8


def test_figure_improvement_among_candidates():
    t = berman_tight(6)
    X = frozenset({tight_vertex(t, (1,)), tight_vertex(t, (1, 3)), tight_vertex(t, (3,))})
    assert exhaustive_improvement(t.instance, t.a_side, 3) is not None
    assert X in {frozenset(S) for S in independent_sets(t.instance, 3)}


def test_ratio_of_optimum_is_one(path_232):
    assert ratio(path_232, exact_mwis(path_232).optimum) == 1


def test_ratio_tight_d4():
    t = berman_tight(4)
    assert ratio(t.instance, Solution.of(t.instance, t.a_side)) == 2


def test_local_search_output_passes_exhaustive_check():
    t = berman_tight(5)
    sol, _ = run_local_search(t.instance, SearchConfig())
    assert exhaustive_improvement(t.instance, sol.A, 12) is None
