"""Squared-weight local search: claw-only SquareImp and bounded-size local improvements.

Both algorithms maintain an independent set ``A`` and repeatedly swap in an independent
set ``X`` whose squared weight exceeds that of the vertices it displaces, ``N(X, A)``.
Candidate sets are always drawn from ``V \\ A``: a vertex already in ``A`` displaces only
itself and contributes zero gain.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .graph_core import (
    ContractError,
    InputError,
    ProblemInstance,
    is_independent,
    neighborhood,
    weight,
    weight_sq,
)

log = logging.getLogger(__name__)


class Strategy(str, Enum):
    CLAW_ONLY = "claw-only"
    BOUNDED = "bounded"


class PivotRule(str, Enum):
    FIRST = "first-canonical"
    BEST = "best-gain"


class ImprovementKind(str, Enum):
    ZERO_CLAW = "zero-claw"
    CLAW = "claw"
    BOUNDED = "bounded"


def default_size_bound(d: int) -> int:
    return (d - 1) ** 2 + (d - 1)


def canonical_key(X: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sort key: by size, then lexicographically by ascending id sequence."""
    seq = tuple(sorted(X))
    return len(seq), seq


@dataclass(frozen=True)
class Solution:
    instance: ProblemInstance = field(repr=False)
    A: frozenset[int]
    weight: Fraction
    weight_sq: Fraction

    @classmethod
    def of(cls, inst: ProblemInstance, A: Iterable[int] = ()) -> Solution:
        A = inst.check_vertices(A)
        if not is_independent(inst, A):
            raise InputError(f"vertex set {sorted(A)} is not independent")
        return cls(inst, A, weight(inst, A), weight_sq(inst, A))

    @property
    def vertices(self) -> list[int]:
        return sorted(self.A)

    def is_maximal(self) -> bool:
        inst = self.instance
        return all(v in self.A or inst.adjacency[v] & self.A for v in range(inst.n))


@dataclass(frozen=True)
class Improvement:
    X: frozenset[int]
    displaced: frozenset[int]
    gain: Fraction
    kind: ImprovementKind
    center: int | None = None

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return canonical_key(self.X)


@dataclass(frozen=True)
class SearchConfig:
    strategy: Strategy = Strategy.BOUNDED
    size_bound: int | None = None  # None: (d-1)^2 + (d-1)
    pivot: PivotRule = PivotRule.FIRST
    max_iterations: int | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.size_bound is not None and self.size_bound < 1:
            raise InputError(f"size_bound must be >= 1, got {self.size_bound}")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise InputError("max_iterations must be nonnegative")
        if self.threads < 1:
            raise InputError("threads must be >= 1")

    def bound_for(self, inst: ProblemInstance) -> int:
        return self.size_bound if self.size_bound is not None else default_size_bound(inst.d)


@dataclass(frozen=True)
class IterationRecord:
    X: tuple[int, ...]
    displaced: tuple[int, ...]
    gain: Fraction
    kind: ImprovementKind
    wsq_before: Fraction
    wsq_after: Fraction


@dataclass
class Trace:
    records: list[IterationRecord] = field(default_factory=list)
    locally_optimal: bool = False
    iteration_capped: bool = False

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def certificate(self) -> str:
        if self.locally_optimal:
            return "locally-optimal"
        return "iteration-capped" if self.iteration_capped else "not-applicable"


def gain(inst: ProblemInstance, A: Iterable[int], X: Iterable[int]) -> Fraction:
    """``w²(X) - w²(N(X, A))``; positive exactly when swapping in ``X`` raises ``w²(A)``."""
    X = inst.check_vertices(X)
    if not is_independent(inst, X):
        raise InputError(f"candidate {sorted(X)} is not independent")
    return weight_sq(inst, X) - weight_sq(inst, neighborhood(inst, X, A))


def _neighbors_in(inst: ProblemInstance, A: frozenset[int]) -> dict[int, frozenset[int]]:
    """N({x}, A) for every x outside A."""
    return {x: inst.adjacency[x] & A for x in range(inst.n) if x not in A}


def _displaced_of(nA: dict[int, frozenset[int]], X: Iterable[int]) -> frozenset[int]:
    out: frozenset[int] = frozenset()
    for x in X:
        out |= nA[x]
    return out


def find_claw_improvement(
    inst: ProblemInstance,
    A: Iterable[int],
    pivot: PivotRule = PivotRule.FIRST,
) -> Improvement | None:
    """Search talon sets of claws (0-claws first, then centers by id) for an improvement.

    Talon sets are capped at ``d - 1`` vertices, the largest claw a ``d``-claw free graph has.
    """
    A = inst.check_vertices(A)
    nA = _neighbors_in(inst, A)
    best: Improvement | None = None

    def consider(X: frozenset[int], kind: ImprovementKind, center: int | None) -> bool:
        nonlocal best
        disp = _displaced_of(nA, X)
        g = sum((inst.wsq(x) for x in X), Fraction(0)) - weight_sq(inst, disp)
        if g <= 0:
            return False
        if best is None or g > best.gain:
            best = Improvement(X, disp, g, kind, center)
        return pivot is PivotRule.FIRST

    for v in range(inst.n):
        if v not in A and consider(frozenset((v,)), ImprovementKind.ZERO_CLAW, None):
            return best
    for c in range(inst.n):
        pool = sorted(inst.adjacency[c] - A)
        for size in range(2, min(inst.d - 1, len(pool)) + 1):
            for T in combinations(pool, size):
                if any(inst.adjacent(a, b) for a, b in combinations(T, 2)):
                    continue
                if consider(frozenset(T), ImprovementKind.CLAW, c):
                    return best
    return best


class _ConnectedSearch:
    """Enumerates independent sets outside ``A`` that are connected under the relation
    "shares an ``A``-neighbor", each exactly once, rooted at their smallest vertex.

    An improving set that splits into parts with pairwise disjoint ``A``-neighborhoods has
    additive gain, so one of its parts improves on its own; restricting to connected sets
    therefore loses no existence.
    """

    def __init__(self, inst: ProblemInstance, A: frozenset[int], size_bound: int, pivot: PivotRule):
        self.inst = inst
        self.bound = size_bound
        self.pivot = pivot
        self.nA = _neighbors_in(inst, A)
        self.cand = sorted(self.nA)
        owners: dict[int, list[int]] = {}
        for x in self.cand:
            for a in self.nA[x]:
                owners.setdefault(a, []).append(x)
        rel: dict[int, set[int]] = {x: set() for x in self.cand}
        for xs in owners.values():
            for x in xs:
                rel[x].update(xs)
        for x in self.cand:
            rel[x].discard(x)
        self.rel = {x: frozenset(r) for x, r in rel.items()}
        # max squared weight among candidates with id >= position
        self.suffix_max: dict[int, Fraction] = {}
        running = Fraction(0)
        for x in reversed(self.cand):
            running = max(running, inst.wsq(x))
            self.suffix_max[x] = running

    def search_root(self, v: int, limit: int, best: Improvement | None) -> Improvement | None:
        """Best candidate among connected sets with minimum ``v`` and size <= ``limit``."""
        inst, rel, nA = self.inst, self.rel, self.nA
        maxw = self.suffix_max[v]
        first = self.pivot is PivotRule.FIRST
        state = {"best": best, "limit": limit}

        def better(g: Fraction, X: frozenset[int]) -> bool:
            cur = state["best"]
            if cur is None:
                return True
            if first:
                return canonical_key(X) < cur.key
            return g > cur.gain or (g == cur.gain and canonical_key(X) < cur.key)

        def extend(sub: list[int], wsq_sub: Fraction, disp: frozenset[int], wsq_disp: Fraction,
                   blocked: frozenset[int], closed: frozenset[int], ext: list[int]) -> None:
            g = wsq_sub - wsq_disp
            if g > 0:
                X = frozenset(sub)
                if better(g, X):
                    state["best"] = Improvement(X, disp, g, ImprovementKind.BOUNDED)
                    if first:
                        state["limit"] = len(sub)
            slots = state["limit"] - len(sub)
            if slots <= 0:
                return
            threshold = Fraction(0) if first or state["best"] is None else state["best"].gain
            optimistic = wsq_sub + slots * maxw - wsq_disp
            if optimistic < threshold or (optimistic == threshold and (first or threshold == 0)):
                return
            ext = list(ext)
            while ext:
                w = ext.pop()
                if w in blocked:
                    continue
                fresh = [u for u in rel[w] if u > v and u not in closed]
                new_disp = disp | nA[w]
                added = weight_sq(inst, nA[w] - disp)
                extend(
                    sub + [w],
                    wsq_sub + inst.wsq(w),
                    new_disp,
                    wsq_disp + added,
                    blocked | inst.adjacency[w],
                    closed | rel[w] | {w},
                    ext + sorted(fresh, reverse=True),
                )
                if state["limit"] - len(sub) <= 0:
                    return

        extend(
            [v],
            inst.wsq(v),
            nA[v],
            weight_sq(inst, nA[v]),
            inst.adjacency[v],
            rel[v] | {v},
            sorted((u for u in rel[v] if u > v), reverse=True),
        )
        return state["best"]

    def run(self, threads: int = 1) -> Improvement | None:
        if threads > 1 and len(self.cand) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda v: self.search_root(v, self.bound, None), self.cand))
            found = [r for r in results if r is not None]
            if not found:
                return None
            if self.pivot is PivotRule.FIRST:
                return min(found, key=lambda imp: imp.key)
            return min(found, key=lambda imp: (-imp.gain, imp.key))
        best: Improvement | None = None
        limit = self.bound
        for v in self.cand:
            best = self.search_root(v, limit, best)
            if best is not None and self.pivot is PivotRule.FIRST:
                # later roots start at larger ids, so only strictly smaller sets can win
                limit = len(best.X) - 1
                if limit == 0:
                    break
        return best


def find_bounded_improvement(
    inst: ProblemInstance,
    A: Iterable[int],
    size_bound: int | None = None,
    pivot: PivotRule = PivotRule.FIRST,
    threads: int = 1,
) -> Improvement | None:
    """Find an independent ``X`` with ``|X| <= size_bound`` and ``w²(X) > w²(N(X, A))``.

    Complete: returns None only when no such set exists. With ``PivotRule.FIRST`` the result
    is the canonically least improving connected set; with ``PivotRule.BEST`` it is the
    connected set of largest gain (ties canonically). The result does not depend on
    ``threads``.
    """
    A = inst.check_vertices(A)
    bound = default_size_bound(inst.d) if size_bound is None else size_bound
    if bound < 1:
        raise InputError(f"size_bound must be >= 1, got {bound}")
    return _ConnectedSearch(inst, A, bound, pivot).run(threads)


def apply_improvement(sol: Solution, imp: Improvement) -> Solution:
    inst = sol.instance
    if imp.displaced != neighborhood(inst, imp.X, sol.A):
        raise ContractError("stale improvement: displaced set no longer matches N(X, A)")
    if not is_independent(inst, imp.X):
        raise ContractError("improvement set is not independent")
    A2 = (sol.A - imp.displaced) | imp.X
    new = Solution(inst, A2, weight(inst, A2), sol.weight_sq + imp.gain)
    if new.weight_sq != weight_sq(inst, A2):
        raise ContractError("improvement gain does not match the recomputed potential")
    return new


def greedy(inst: ProblemInstance) -> Solution:
    """Take the heaviest remaining vertex (lowest id on ties), drop its closed neighborhood, repeat."""
    alive = set(range(inst.n))
    chosen = []
    for v in sorted(range(inst.n), key=lambda u: (-inst.weights[u], u)):
        if v in alive:
            chosen.append(v)
            alive -= inst.adjacency[v]
            alive.discard(v)
    return Solution.of(inst, chosen)


def find_improvement(inst: ProblemInstance, A: frozenset[int], cfg: SearchConfig) -> Improvement | None:
    if cfg.strategy is Strategy.CLAW_ONLY:
        return find_claw_improvement(inst, A, cfg.pivot)
    return find_bounded_improvement(inst, A, cfg.bound_for(inst), cfg.pivot, cfg.threads)


def run_local_search(
    inst: ProblemInstance,
    cfg: SearchConfig = SearchConfig(),
    warm_start: Iterable[int] | None = None,
) -> tuple[Solution, Trace]:
    """Apply improvements until none is left (or ``cfg.max_iterations`` is reached)."""
    sol = Solution.of(inst, warm_start or ())
    trace = Trace()
    while True:
        if cfg.max_iterations is not None and trace.iterations >= cfg.max_iterations:
            trace.iteration_capped = True
            break
        imp = find_improvement(inst, sol.A, cfg)
        if imp is None:
            trace.locally_optimal = True
            break
        new = apply_improvement(sol, imp)
        trace.records.append(
            IterationRecord(
                tuple(sorted(imp.X)),
                tuple(sorted(imp.displaced)),
                imp.gain,
                imp.kind,
                sol.weight_sq,
                new.weight_sq,
            )
        )
        log.debug("iteration %d: X=%s gain=%s", trace.iterations, sorted(imp.X), imp.gain)
        sol = new
    return sol, trace
