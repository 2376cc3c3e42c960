"""Brute-force ground truth for small instances.

Nothing here reuses the candidate generation in :mod:`clawfree.search`; the point is to
have a second, deliberately naive route to the same answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph_core import InputError, ProblemInstance
from .search import Solution

DEFAULT_MWIS_CAP = 30
DEFAULT_ENUM_CAP = 20
DEFAULT_ENUM_BOUND = 12


class OracleRefused(InputError):
    """The instance is larger than the configured brute-force cap."""


@dataclass(frozen=True)
class OracleResult:
    optimum: Solution
    weight: Fraction
    nodes: int


def exact_mwis(inst: ProblemInstance, cap: int = DEFAULT_MWIS_CAP) -> OracleResult:
    """Maximum-weight independent set by branch and bound over vertices in id order.

    Include-branches are explored first and only strict improvements replace the incumbent,
    so the result is the lexicographically least maximizer.
    """
    if inst.n > cap:
        raise OracleRefused(f"exact_mwis refuses {inst.n} vertices (cap {cap})")
    n = inst.n
    closed = [(1 << v) | sum(1 << u for u in inst.adjacency[v]) for v in range(n)]
    w = inst.weights
    best_w = Fraction(-1)
    best_mask = 0
    nodes = 0

    def mask_weight(mask: int) -> Fraction:
        total = Fraction(0)
        while mask:
            low = mask & -mask
            total += w[low.bit_length() - 1]
            mask ^= low
        return total

    def branch(cand: int, chosen: int, cur: Fraction) -> None:
        nonlocal best_w, best_mask, nodes
        nodes += 1
        if not cand:
            if cur > best_w:
                best_w, best_mask = cur, chosen
            return
        if cur + mask_weight(cand) <= best_w:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        branch(cand & ~closed[v], chosen | low, cur + w[v])
        branch(cand & ~low, chosen, cur)

    branch((1 << n) - 1, 0, Fraction(0))
    A = [v for v in range(n) if best_mask >> v & 1]
    sol = Solution.of(inst, A)
    return OracleResult(sol, sol.weight, nodes)


def independent_sets(inst: ProblemInstance, max_size: int):
    """Yield every independent set of at most ``max_size`` vertices as a sorted tuple."""
    n = inst.n

    def rec(start: int, current: list[int], forbidden: set[int]):
        yield tuple(current)
        if len(current) == max_size:
            return
        for v in range(start, n):
            if v in forbidden:
                continue
            current.append(v)
            yield from rec(v + 1, current, forbidden | inst.adjacency[v])
            current.pop()

    yield from rec(0, [], set())


def exhaustive_improvement(
    inst: ProblemInstance,
    A,
    size_bound: int,
    cap: int = DEFAULT_ENUM_CAP,
    bound_cap: int = DEFAULT_ENUM_BOUND,
) -> frozenset[int] | None:
    """First independent ``X`` (any vertices, ``|X| <= size_bound``) with ``w²(X) > w²(N(X, A))``."""
    if inst.n > cap or size_bound > bound_cap:
        raise OracleRefused(f"exhaustive_improvement refuses n={inst.n}, bound={size_bound}")
    A = frozenset(A)
    for X in independent_sets(inst, size_bound):
        gained = sum((inst.weights[x] ** 2 for x in X), Fraction(0))
        displaced = {a for a in A if a in X or any(a in inst.adjacency[x] for x in X)}
        lost = sum((inst.weights[a] ** 2 for a in displaced), Fraction(0))
        if gained > lost:
            return frozenset(X)
    return None


def ratio(inst: ProblemInstance, sol: Solution, cap: int = DEFAULT_MWIS_CAP) -> Fraction:
    """``w(A*) / w(A)`` against the exact optimum."""
    if sol.weight <= 0:
        raise InputError("ratio needs a solution of positive weight")
    return exact_mwis(inst, cap).weight / sol.weight
