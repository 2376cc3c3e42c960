from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import strategies as st

from clawfree.graph_core import ProblemInstance, is_d_claw_free


@st.composite
def small_instances(draw, max_n=9, d=None):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    edges = [p for p in pairs if draw(st.booleans())] if pairs else []
    weights = [
        Fraction(draw(st.integers(1, 12)), draw(st.integers(1, 4))) for _ in range(n)
    ]
    dd = d if d is not None else draw(st.integers(2, 5))
    return ProblemInstance.from_edges(weights, edges, dd)


@st.composite
def claw_free_instances(draw, max_n=9):
    """Like small_instances, with d raised until the graph is d-claw-free."""
    inst = draw(small_instances(max_n=max_n))
    d = inst.d
    while is_d_claw_free(inst, d) is not True:
        d += 1
    return inst.with_d(d)


@st.composite
def instance_with_independent_set(draw, max_n=9, d=None):
    inst = draw(small_instances(max_n=max_n, d=d))
    A: set[int] = set()
    for v in draw(st.permutations(list(range(inst.n)))):
        if draw(st.booleans()) and not inst.adjacency[v] & A:
            A.add(v)
    return inst, frozenset(A)


def path(weights, d=3):
    return ProblemInstance.from_edges(weights, [(i, i + 1) for i in range(len(weights) - 1)], d)


@pytest.fixture
def path_232():
    return path([2, 3, 2])
