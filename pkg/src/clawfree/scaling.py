"""Scale-and-truncate wrapper bounding the number of local-search iterations.

Weights are rescaled so the greedy solution weighs ``N * |V|``, floored to integers, and
vertices whose floor is zero are dropped. The integer potential then rises by at least one
per iteration and never exceeds ``(d-1)^2 N^2 |V|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph_core import InputError, ProblemInstance, induced_subgraph
from .search import SearchConfig, Solution, Trace, greedy, run_local_search


@dataclass(frozen=True)
class ScalingConfig:
    N: Fraction = Fraction(2)

    def __post_init__(self) -> None:
        object.__setattr__(self, "N", Fraction(self.N))
        if self.N <= 1:
            raise InputError(f"N must exceed 1, got {self.N}")

    @property
    def loss_factor(self) -> Fraction:
        """Worst-case guarantee loss N / (N - 1)."""
        return self.N / (self.N - 1)


@dataclass(frozen=True)
class ScaledInstance:
    base: ProblemInstance
    factor: Fraction
    int_weights: tuple[int, ...]  # floor(factor * w(v)) for every original vertex
    survivors: tuple[int, ...]  # original ids with a positive floor, ascending
    instance: ProblemInstance | None  # truncated instance over survivors (re-indexed)
    anchor: frozenset[int]
    anchor_scaled_weight: Fraction

    def to_original(self, A) -> frozenset[int]:
        return frozenset(self.survivors[i] for i in A)


@dataclass(frozen=True)
class ScaledStats:
    iterations: int
    iteration_bound: int
    factor: Fraction
    loss_factor: Fraction
    deleted: int
    potentials: tuple[int, ...]  # integer potential after each iteration, starting from the warm start


def iteration_bound(d: int, N: Fraction, n: int) -> int:
    """``floor((d-1)^2 N^2 |V|^2)``."""
    return math.floor((d - 1) ** 2 * Fraction(N) ** 2 * n * n)


def scale_truncate(inst: ProblemInstance, cfg: ScalingConfig = ScalingConfig()) -> ScaledInstance:
    if inst.n == 0:
        return ScaledInstance(inst, Fraction(1), (), (), None, frozenset(), Fraction(0))
    anchor = greedy(inst)
    factor = cfg.N * inst.n / anchor.weight
    floors = tuple(math.floor(factor * w) for w in inst.weights)
    survivors = tuple(v for v in range(inst.n) if floors[v] > 0)
    truncated = None
    if survivors:
        truncated, _ = induced_subgraph(inst, survivors, {v: Fraction(floors[v]) for v in survivors})
    return ScaledInstance(inst, factor, floors, survivors, truncated, anchor.A, factor * anchor.weight)


def solve_scaled(
    inst: ProblemInstance,
    cfg: ScalingConfig = ScalingConfig(),
    search_cfg: SearchConfig = SearchConfig(),
) -> tuple[Solution, Trace, ScaledStats]:
    """Run local search on the truncated integer weights; report the result in original weights."""
    scaled = scale_truncate(inst, cfg)
    bound = iteration_bound(inst.d, cfg.N, inst.n)
    if scaled.instance is None:
        stats = ScaledStats(0, bound, scaled.factor, cfg.loss_factor, inst.n, (0,))
        return Solution.of(inst), Trace(locally_optimal=True), stats
    sol_int, trace = run_local_search(scaled.instance, search_cfg)
    potentials = (0,) + tuple(int(r.wsq_after) for r in trace.records)
    stats = ScaledStats(
        trace.iterations,
        bound,
        scaled.factor,
        cfg.loss_factor,
        inst.n - len(scaled.survivors),
        potentials,
    )
    return Solution.of(inst, scaled.to_original(sol_int.A)), trace, stats
