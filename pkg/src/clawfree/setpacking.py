"""Weighted k-set packing and its reduction to MWIS on the conflict graph."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph_core import ContractError, InputError, ProblemInstance, as_fraction


@dataclass(frozen=True)
class SetSystem:
    """A weighted family of sets of size at most ``k`` over a dense integer universe."""

    k: int
    sets: tuple[tuple[Fraction, frozenset[int]], ...]
    # original element tokens, indexed by the dense integer id
    labels: tuple[Hashable, ...] = ()

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        for i, (w, elems) in enumerate(self.sets):
            if not isinstance(w, Fraction) or w <= 0:
                raise InputError(f"set {i} needs a positive rational weight, got {w!r}")
            if not 1 <= len(elems) <= self.k:
                raise InputError(f"set {i} has {len(elems)} elements, allowed 1..{self.k}")

    @classmethod
    def from_sets(cls, k: int, sets: Iterable[tuple[object, Iterable[Hashable]]]) -> SetSystem:
        """Build a system from ``(weight, elements)`` pairs, normalizing element tokens to ids."""
        ids: dict[Hashable, int] = {}
        out = []
        for w, elems in sets:
            members = frozenset(ids.setdefault(e, len(ids)) for e in elems)
            out.append((as_fraction(w), members))
        return cls(k, tuple(out), tuple(ids))

    def __len__(self) -> int:
        return len(self.sets)

    def weight_of(self, indices: Iterable[int]) -> Fraction:
        return sum((self.sets[i][0] for i in indices), Fraction(0))

    def is_packing(self, indices: Sequence[int]) -> bool:
        return all(not (self.sets[a][1] & self.sets[b][1]) for a, b in combinations(indices, 2))


def conflict_graph(sys: SetSystem) -> ProblemInstance:
    """One vertex per set, an edge between every pair of intersecting sets, ``d = k + 1``."""
    by_element: dict[int, list[int]] = {}
    for i, (_, elems) in enumerate(sys.sets):
        for e in elems:
            by_element.setdefault(e, []).append(i)
    edges = {(a, b) for members in by_element.values() for a, b in combinations(members, 2)}
    return ProblemInstance.from_edges([w for w, _ in sys.sets], sorted(edges), sys.k + 1)


def lift_solution(sys: SetSystem, sol) -> list[int]:
    """Map a conflict-graph solution (a ``Solution`` or vertex ids) to set indices, ascending.

    The returned sets are pairwise disjoint and weigh exactly what the solution weighs.
    """
    chosen = sorted(getattr(sol, "A", sol))
    if any(not 0 <= i < len(sys) for i in chosen):
        raise ContractError("solution refers to a set index outside the system")
    if not sys.is_packing(chosen):
        raise ContractError("solution is not independent in the conflict graph")
    return chosen
