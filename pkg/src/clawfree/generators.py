"""Instance factories. All randomness goes through ``random.Random(seed)`` (Mersenne Twister)."""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph_core import InputError, ProblemInstance, as_fraction, is_d_claw_free
from .setpacking import SetSystem


@dataclass(frozen=True)
class TightInstance:
    d: int
    instance: ProblemInstance
    a_side: frozenset[int]
    b_side: frozenset[int]
    labels: tuple[tuple[int, ...], ...]  # per vertex: (i,) for A-side i, else the subset of A


def berman_tight(d: int, weight: object = 1) -> TightInstance:
    """Berman's bipartite example: ``A = {1..d-1}``, ``B`` = singletons and pairs of ``A``.

    Vertex ids: A-side elements ``1..d-1`` get ids ``0..d-2``; then the singletons, then the
    pairs in lexicographic order. ``labels`` keeps the 1-based element names.
    """
    if d < 3:
        raise InputError(f"the tight instance needs d >= 3, got {d}")
    w = as_fraction(weight)
    elems = list(range(1, d))
    labels: list[tuple[int, ...]] = [(i,) for i in elems]
    b_sets = [(i,) for i in elems] + list(combinations(elems, 2))
    labels += b_sets
    edges = [(a - 1, len(elems) + j) for j, b in enumerate(b_sets) for a in b]
    inst = ProblemInstance.from_edges([w] * len(labels), edges, d)
    a_side = frozenset(range(d - 1))
    b_side = frozenset(range(d - 1, len(labels)))
    return TightInstance(d, inst, a_side, b_side, tuple(labels))


def tight_vertex(t: TightInstance, label: Sequence[int], side: str = "B") -> int:
    """Id of the vertex named ``label`` on the given side (``"A"`` or ``"B"``)."""
    label = tuple(sorted(label))
    ids = t.a_side if side == "A" else t.b_side
    for v in sorted(ids):
        if t.labels[v] == label:
            return v
    raise KeyError(label)


def _weight(rng: random.Random, weight_range: tuple[int, int], denominator: int) -> Fraction:
    lo, hi = weight_range
    if lo <= 0 or hi < lo:
        raise InputError(f"weight range must satisfy 0 < lo <= hi, got {weight_range}")
    return Fraction(rng.randint(lo * denominator, hi * denominator), denominator)


def random_set_packing(
    num_sets: int,
    universe_size: int,
    k: int,
    weight_range: tuple[int, int] = (1, 10),
    seed: int = 0,
    denominator: int = 1,
) -> SetSystem:
    if k < 1 or num_sets < 0:
        raise InputError("need k >= 1 and num_sets >= 0")
    if universe_size < k:
        raise InputError(f"universe of {universe_size} elements cannot hold sets of size {k}")
    rng = random.Random(seed)
    sets = []
    for _ in range(num_sets):
        size = rng.randint(1, k)
        elems = frozenset(rng.sample(range(universe_size), size))
        sets.append((_weight(rng, weight_range, denominator), elems))
    return SetSystem(k, tuple(sets), tuple(range(universe_size)))


def clique_union(
    sizes: Sequence[int],
    weight_range: tuple[int, int] = (1, 10),
    seed: int = 0,
    denominator: int = 1,
) -> ProblemInstance:
    """Disjoint cliques of the given sizes, consecutive ids per clique, ``d = 2``."""
    if not sizes or any(s < 1 for s in sizes):
        raise InputError("clique sizes must be a nonempty list of positive integers")
    rng = random.Random(seed)
    edges = []
    start = 0
    for s in sizes:
        edges += list(combinations(range(start, start + s), 2))
        start += s
    weights = [_weight(rng, weight_range, denominator) for _ in range(start)]
    return ProblemInstance.from_edges(weights, edges, 2)


@dataclass(frozen=True)
class SamplingOutcome:
    instance: ProblemInstance | None
    attempts: int

    @property
    def ok(self) -> bool:
        return self.instance is not None


def random_claw_free(
    n: int,
    edge_prob: float,
    d: int,
    seed: int = 0,
    max_attempts: int = 1000,
    weight_range: tuple[int, int] = (1, 10),
    denominator: int = 1,
) -> SamplingOutcome:
    """Rejection-sample ``G(n, p)`` graphs until one is ``d``-claw free."""
    if n > 30:
        raise InputError("random_claw_free is limited to n <= 30")
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < edge_prob]
        weights = [_weight(rng, weight_range, denominator) for _ in range(n)]
        inst = ProblemInstance.from_edges(weights, edges, d)
        if is_d_claw_free(inst, d) is True:
            return SamplingOutcome(inst, attempt)
    return SamplingOutcome(None, max_attempts)
