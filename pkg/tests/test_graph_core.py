from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clawfree.generators import berman_tight, tight_vertex
from clawfree.graph_core import (
    Claw,
    InputError,
    ProblemInstance,
    is_d_claw_free,
    is_independent,
    neighborhood,
    weight_sq,
)

from conftest import small_instances


def brute_claw_free(inst, d):
    """Independent oracle: no vertex has d pairwise non-adjacent neighbors."""
    for c in range(inst.n):
        for T in combinations(sorted(inst.adjacency[c]), d):
            if all(b not in inst.adjacency[a] for a, b in combinations(T, 2)):
                return False
    return True


def star(leaves, d=3):
    return ProblemInstance.from_edges([1] * (leaves + 1), [(0, i) for i in range(1, leaves + 1)], d)


class TestInstance:
    def test_rejects_nonpositive_weight(self):
        with pytest.raises(InputError):
            ProblemInstance.from_edges([1, 0], [], 3)

    def test_rejects_self_loop(self):
        with pytest.raises(InputError):
            ProblemInstance.from_edges([1, 1], [(1, 1)], 3)

    def test_rejects_small_d(self):
        with pytest.raises(InputError):
            ProblemInstance.from_edges([1], [], 1)

    def test_rejects_asymmetric_adjacency(self):
        with pytest.raises(InputError):
            ProblemInstance(2, (frozenset({1}), frozenset()), (Fraction(1), Fraction(1)), 3)

    def test_rejects_float_weight(self):
        with pytest.raises(InputError):
            ProblemInstance.from_edges([0.5], [], 3)


class TestNeighborhood:
    def test_self_inclusion(self):
        inst = ProblemInstance.from_edges([1], [], 2)
        assert neighborhood(inst, {0}, {0}) == {0}

    def test_empty_U(self):
        inst = star(3)
        assert neighborhood(inst, set(), {0, 1, 2}) == frozenset()

    def test_tight_instance_pair(self):
        t = berman_tight(4)
        u = tight_vertex(t, (1, 2))
        assert neighborhood(t.instance, {u}, t.a_side) == {
            tight_vertex(t, (1,), "A"),
            tight_vertex(t, (2,), "A"),
        }

    def test_invalid_id(self):
        with pytest.raises(InputError):
            neighborhood(star(2), {7}, {0})

    @given(small_instances(), st.data())
    def test_properties(self, inst, data):
        ids = list(range(inst.n))
        U1 = frozenset(data.draw(st.sets(st.sampled_from(ids))) if ids else set())
        U2 = U1 | frozenset(data.draw(st.sets(st.sampled_from(ids))) if ids else set())
        W = frozenset(data.draw(st.sets(st.sampled_from(ids))) if ids else set())
        N1 = neighborhood(inst, U1, W)
        assert N1 <= W
        assert U1 & W <= N1
        assert N1 <= neighborhood(inst, U2, W)


class TestIndependenceAndWeights:
    def test_independent(self):
        inst = ProblemInstance.from_edges([1, 1], [(0, 1)], 3)
        assert is_independent(inst, set())
        assert not is_independent(inst, {0, 1})

    def test_tight_b_side_independent(self):
        t = berman_tight(4)
        assert len(t.b_side) == 6
        assert is_independent(t.instance, t.b_side)

    def test_weight_sq(self):
        inst = ProblemInstance.from_edges([1, 1, 1, Fraction(1, 2), Fraction(1, 3)], [], 3)
        assert weight_sq(inst, set()) == 0
        assert weight_sq(inst, {0, 1, 2}) == 3
        assert weight_sq(inst, {3, 4}) == Fraction(13, 36)

    @given(small_instances(), st.data())
    def test_weight_sq_additive(self, inst, data):
        ids = list(range(inst.n))
        S = frozenset(data.draw(st.sets(st.sampled_from(ids))) if ids else set())
        S1 = frozenset(data.draw(st.sets(st.sampled_from(sorted(S)))) if S else set())
        assert weight_sq(inst, S) == weight_sq(inst, S1) + weight_sq(inst, S - S1)


class TestClawFree:
    def test_star_has_3_claw(self):
        res = is_d_claw_free(star(3), 3)
        assert isinstance(res, Claw)
        assert res.center == 0 and res.talons == {1, 2, 3}

    def test_star_is_4_claw_free(self):
        assert is_d_claw_free(star(3), 4) is True

    def test_one_claw_is_an_edge(self):
        res = is_d_claw_free(ProblemInstance.from_edges([1, 1], [(0, 1)], 2), 1)
        assert isinstance(res, Claw) and res.is_valid_in(ProblemInstance.from_edges([1, 1], [(0, 1)], 2))

    def test_tight_d6(self):
        t = berman_tight(6)
        assert is_d_claw_free(t.instance, 6) is True
        for a in t.a_side:
            nbrs = sorted(t.instance.adjacency[a])
            assert len(nbrs) == 5
            assert all(b not in t.instance.adjacency[c] for b, c in combinations(nbrs, 2))
        assert isinstance(is_d_claw_free(t.instance, 5), Claw)

    @settings(max_examples=60)
    @given(small_instances(max_n=12), st.integers(1, 5))
    def test_matches_brute_force(self, inst, d):
        res = is_d_claw_free(inst, d)
        assert (res is True) == brute_claw_free(inst, d)
        if res is not True:
            assert res.is_valid_in(inst) and len(res.talons) == d
