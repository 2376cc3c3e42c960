"""Weighted graphs, closed neighborhoods and claw detection.

Vertices are dense integer ids ``0..n-1``; weights are exact ``Fraction`` values.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational

VertexSet = frozenset


class InputError(ValueError):
    """Raised when an instance, vertex set or argument is malformed."""


class ContractError(RuntimeError):
    """Raised when a caller violates a documented precondition between objects."""


def as_fraction(value: Rational | int | str) -> Fraction:
    if isinstance(value, float):
        raise InputError(f"weights must be exact rationals, got float {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational weight: {value!r}") from exc


@dataclass(frozen=True)
class ProblemInstance:
    """An undirected graph with positive rational vertex weights and claw parameter ``d``."""

    n: int
    adjacency: tuple[frozenset[int], ...]
    weights: tuple[Fraction, ...]
    d: int
    _wsq: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.d < 2:
            raise InputError(f"claw parameter d must be >= 2, got {self.d}")
        if len(self.adjacency) != self.n or len(self.weights) != self.n:
            raise InputError("adjacency and weights must have one entry per vertex")
        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise InputError(f"self-loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise InputError(f"edge {v}-{u} leaves the vertex range")
                if v not in self.adjacency[u]:
                    raise InputError(f"adjacency is not symmetric at {v}-{u}")
        for v, w in enumerate(self.weights):
            if not isinstance(w, Fraction):
                raise InputError(f"weight of vertex {v} is not a Fraction")
            if w <= 0:
                raise InputError(f"weight of vertex {v} must be positive, got {w}")
        object.__setattr__(self, "_wsq", tuple(w * w for w in self.weights))

    @classmethod
    def from_edges(
        cls,
        weights: Iterable[Rational | int | str],
        edges: Iterable[tuple[int, int]],
        d: int,
    ) -> ProblemInstance:
        ws = tuple(as_fraction(w) for w in weights)
        n = len(ws)
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {u}-{v} leaves the vertex range 0..{n - 1}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(frozenset(a) for a in adj), ws, d)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def w(self, v: int) -> Fraction:
        return self.weights[v]

    def wsq(self, v: int) -> Fraction:
        return self._wsq[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def with_d(self, d: int) -> ProblemInstance:
        return ProblemInstance(self.n, self.adjacency, self.weights, d)

    def check_vertices(self, S: Iterable[int]) -> frozenset[int]:
        S = frozenset(S)
        for v in S:
            if not isinstance(v, int) or not 0 <= v < self.n:
                raise InputError(f"vertex id {v!r} is not in 0..{self.n - 1}")
        return S


@dataclass(frozen=True)
class Claw:
    """An induced claw; ``center is None`` denotes a 0-claw with a single talon."""

    center: int | None
    talons: frozenset[int]

    def __post_init__(self) -> None:
        if self.center is None:
            if len(self.talons) != 1:
                raise InputError("a 0-claw has exactly one talon")
        elif not self.talons or self.center in self.talons:
            raise InputError("a claw needs a nonempty talon set excluding its center")

    def is_valid_in(self, inst: ProblemInstance) -> bool:
        if self.center is None:
            return True
        if any(not inst.adjacent(self.center, t) for t in self.talons):
            return False
        return is_independent(inst, self.talons)


def neighborhood(inst: ProblemInstance, U: Iterable[int], W: Iterable[int]) -> frozenset[int]:
    """Return the members of ``W`` that lie in ``U`` or are adjacent to some vertex of ``U``."""
    U = inst.check_vertices(U)
    W = inst.check_vertices(W)
    out = set(U & W)
    for u in U:
        out |= inst.adjacency[u] & W
    return frozenset(out)


def is_independent(inst: ProblemInstance, S: Iterable[int]) -> bool:
    S = inst.check_vertices(S)
    return all(not (inst.adjacency[v] & S) for v in S)


def weight(inst: ProblemInstance, S: Iterable[int]) -> Fraction:
    return sum((inst.weights[v] for v in inst.check_vertices(S)), Fraction(0))


def weight_sq(inst: ProblemInstance, S: Iterable[int]) -> Fraction:
    """Sum of squared vertex weights (not the square of the summed weight)."""
    return sum((inst.wsq(v) for v in inst.check_vertices(S)), Fraction(0))


def _independent_subset_of_size(inst: ProblemInstance, pool: list[int], size: int) -> tuple[int, ...] | None:
    # DFS over pool in ascending order; first hit is lexicographically least
    chosen: list[int] = []

    def extend(start: int) -> bool:
        if len(chosen) == size:
            return True
        for i in range(start, len(pool)):
            if len(pool) - i < size - len(chosen):
                return False
            v = pool[i]
            if any(inst.adjacent(v, c) for c in chosen):
                continue
            chosen.append(v)
            if extend(i + 1):
                return True
            chosen.pop()
        return False

    return tuple(chosen) if extend(0) else None


def find_claw(inst: ProblemInstance, d: int) -> Claw | None:
    """Return the first induced ``d``-claw (centers by id, talons lexicographic), or None."""
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    for c in range(inst.n):
        nbrs = sorted(inst.adjacency[c])
        if len(nbrs) < d:
            continue
        talons = _independent_subset_of_size(inst, nbrs, d)
        if talons is not None:
            return Claw(c, frozenset(talons))
    return None


def is_d_claw_free(inst: ProblemInstance, d: int) -> bool | Claw:
    """``True`` if no induced ``d``-claw exists, otherwise a witness :class:`Claw`.

    For ``d == 1`` the witness is any edge, read as a center with one talon.
    """
    witness = find_claw(inst, d)
    return True if witness is None else witness


def claws_centered_at(inst: ProblemInstance, center: int, size: int) -> list[frozenset[int]]:
    """All talon sets of induced ``size``-claws centered at ``center`` (brute force)."""
    nbrs = sorted(inst.adjacency[center])
    return [
        frozenset(T)
        for T in combinations(nbrs, size)
        if all(not inst.adjacent(a, b) for a, b in combinations(T, 2))
    ]


def induced_subgraph(inst: ProblemInstance, keep: Iterable[int], weights: Mapping[int, Fraction] | None = None,
                     ) -> tuple[ProblemInstance, list[int]]:
    """Restrict to ``keep`` (re-indexed in ascending order); returns the instance and new->old ids."""
    old = sorted(inst.check_vertices(keep))
    index = {v: i for i, v in enumerate(old)}
    ws = [weights[v] if weights is not None else inst.weights[v] for v in old]
    edges = [(index[u], index[v]) for u, v in inst.edges if u in index and v in index]
    return ProblemInstance.from_edges(ws, edges, inst.d), old
