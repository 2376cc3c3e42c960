"""Charges, contributions and the single/double classification at a pair (A, A*).

``A`` is a maximal independent set (typically a local-search output) and ``A*`` any
independent reference set, usually the oracle optimum. Everything is exact.
"""

from __future__ import annotations

import math
import operator
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from .graph_core import ContractError, InputError, ProblemInstance, is_independent

DEFAULT_EPSILON = Fraction(1, 5308416)
DEFAULT_DELTA = Fraction(1, 6)


def _vertex_set(inst: ProblemInstance, S) -> frozenset[int]:
    return inst.check_vertices(getattr(S, "A", S))


def _heaviest(inst: ProblemInstance, S: Iterable[int]) -> int:
    return min(S, key=lambda v: (-inst.weights[v], v))


def _nbhd(inst: ProblemInstance, u: int, A: frozenset[int]) -> frozenset[int]:
    return (inst.adjacency[u] & A) | ({u} & A)


def _wsum(inst: ProblemInstance, S: Iterable[int]) -> Fraction:
    return sum((inst.weights[v] for v in S), Fraction(0))


def _wsq(inst: ProblemInstance, S: Iterable[int]) -> Fraction:
    return sum((inst.wsq(v) for v in S), Fraction(0))


@dataclass(frozen=True)
class ChargeReport:
    A: frozenset[int]
    Astar: frozenset[int]
    weights: dict[int, Fraction] = field(repr=False)  # w(v) for v in A
    neighbors: dict[int, frozenset[int]]  # u in A* -> N(u, A)
    n: dict[int, int]  # u in A* -> heaviest A-neighbor (lowest id on ties)
    charge: dict[int, Fraction]  # u in A* -> charge(u, n(u))
    T: dict[int, frozenset[int]]  # v in A -> {u : charge(u, v) > 0}
    received: dict[int, Fraction]  # v in A -> sum of positive charges sent to v
    half_neighborhoods: Fraction  # sum over A* of w(N(u, A)) / 2
    positive_charges: Fraction
    optimum_weight: Fraction
    solution_weight: Fraction

    @property
    def decomposition(self) -> Fraction:
        """Upper bound on ``w(A*)``: half-neighborhood mass plus all positive charges."""
        return self.half_neighborhoods + self.positive_charges

    @property
    def decomposition_holds(self) -> bool:
        return self.decomposition >= self.optimum_weight

    def charge_to(self, u: int, v: int) -> Fraction:
        return self.charge[u] if self.n[u] == v else Fraction(0)


def compute_charges(inst: ProblemInstance, A, Astar) -> ChargeReport:
    A = _vertex_set(inst, A)
    Astar = _vertex_set(inst, Astar)
    if not is_independent(inst, A) or not is_independent(inst, Astar):
        raise InputError("A and A* must both be independent")
    neighbors, n, charge = {}, {}, {}
    for u in sorted(Astar):
        N = _nbhd(inst, u, A)
        if not N:
            raise ContractError(f"vertex {u} has no neighbor in A; A is not maximal")
        neighbors[u] = N
        n[u] = _heaviest(inst, N)
        charge[u] = inst.weights[u] - _wsum(inst, N) / 2
    T = {v: frozenset(u for u in n if n[u] == v and charge[u] > 0) for v in sorted(A)}
    received = {v: sum((charge[u] for u in T[v]), Fraction(0)) for v in T}
    half = sum((_wsum(inst, N) for N in neighbors.values()), Fraction(0)) / 2
    positive = sum((c for c in charge.values() if c > 0), Fraction(0))
    wstar = _wsum(inst, Astar)
    if half + sum(charge.values(), Fraction(0)) != wstar:
        raise AssertionError("charge decomposition of w(A*) failed")  # exact identity
    return ChargeReport(
        A, Astar, {v: inst.weights[v] for v in A}, neighbors, n, charge, T, received,
        half, positive, wstar, _wsum(inst, A),
    )


def verify_charge_bound(report: ChargeReport) -> dict[int, bool]:
    """Per ``v`` in ``A``: do the positive charges it receives stay within ``w(v)/2``?"""
    return {v: report.received[v] <= report.weights[v] / 2 for v in sorted(report.A)}


@dataclass(frozen=True)
class ContributionReport:
    contr: dict[tuple[int, int], Fraction]  # (u, v) with v in N(u, A)
    received: dict[int, Fraction]  # v -> sum over u of contr(u, v)
    given: dict[int, Fraction]  # u -> sum over v of contr(u, v)
    upper_ok: dict[int, bool]  # v -> received <= w(v)
    lower_ok: dict[int, bool]  # u -> given >= contr(u, n(u)) >= 2 charge(u, n(u))

    def value(self, u: int, v: int) -> Fraction:
        return self.contr.get((u, v), Fraction(0))


def compute_contributions(inst: ProblemInstance, A, Astar) -> ContributionReport:
    charges = compute_charges(inst, A, Astar)
    contr: dict[tuple[int, int], Fraction] = {}
    received = {v: Fraction(0) for v in charges.A}
    given = {}
    lower_ok = {}
    for u, N in charges.neighbors.items():
        total = Fraction(0)
        for v in sorted(N):
            c = max(Fraction(0), (inst.wsq(u) - _wsq(inst, N - {v})) / inst.weights[v])
            contr[(u, v)] = c
            received[v] += c
            total += c
        given[u] = total
        own = contr[(u, charges.n[u])]
        lower_ok[u] = total >= own >= 2 * charges.charge[u]
    upper_ok = {v: received[v] <= inst.weights[v] for v in sorted(charges.A)}
    return ContributionReport(contr, received, given, upper_ok, lower_ok)


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None when it is irrational."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@dataclass(frozen=True)
class VertexLabel:
    u: int
    v1: int
    v2: int | None
    single: bool
    double: bool

    @property
    def label(self) -> str:
        if self.single and self.double:
            return "both"
        return "single" if self.single else "double" if self.double else "neither"


@dataclass(frozen=True)
class Classification:
    epsilon: Fraction
    delta: Fraction
    sqrt_epsilon: Fraction
    P: frozenset[int]
    labels: dict[int, VertexLabel]  # every u in some T_v
    B_bar: frozenset[int]
    C: frozenset[int]
    D: frozenset[int]
    B: frozenset[int]
    B_star: frozenset[int]
    t: dict[int, int]
    lemma_checks: dict[str, bool] | None  # None unless A carries a termination certificate

    @property
    def singles(self) -> frozenset[int]:
        return frozenset(u for u, lab in self.labels.items() if lab.single)

    @property
    def doubles(self) -> frozenset[int]:
        return frozenset(u for u, lab in self.labels.items() if lab.double)


def classify(
    inst: ProblemInstance,
    A,
    Astar,
    epsilon: Fraction = DEFAULT_EPSILON,
    delta: Fraction = DEFAULT_DELTA,
    terminated: bool = False,
) -> Classification:
    """Payback set, single/double labels and the sets B̄, C, D, B, B* with the map t.

    ``terminated`` asserts that no improving claw exists at ``A``; only then are the
    structural checks (every member of ``T_v`` single or double, at most one single, for
    each ``v`` in B̄) evaluated.
    """
    epsilon, delta = Fraction(epsilon), Fraction(delta)
    s = rational_sqrt(epsilon)
    if s is None:
        raise InputError(f"classification needs a rational square root of epsilon, got {epsilon}")
    rep = compute_charges(inst, A, Astar)
    w = inst.weights
    P = frozenset(u for u, N in rep.neighbors.items() if _wsum(inst, N) >= 3 * w[u])

    labels = {}
    for v, Tv in rep.T.items():
        for u in sorted(Tv):
            N = rep.neighbors[u]
            wN = _wsum(inst, N)
            ratio_ok = 1 - s <= w[u] / w[v] <= 1 + s
            single = ratio_ok and wN <= (1 + s) * w[v]
            v2 = _heaviest(inst, N - {v}) if len(N) >= 2 else None
            double = (
                v2 is not None
                and ratio_ok
                and 1 - s <= w[v2] / w[v] <= 1
                and (2 - s) * w[v] <= wN < 2 * w[u]
            )
            labels[u] = VertexLabel(u, v, v2, single, double)

    B_bar = frozenset(v for v in rep.A if rep.received[v] > (1 - epsilon) / 2 * w[v])
    C = frozenset(v for v in B_bar if all(labels[u].double for u in rep.T[v]))
    D = frozenset(u for v in C for u in rep.T[v])
    B = B_bar - C
    t = {}
    for v in sorted(B):
        singles = [u for u in sorted(rep.T[v]) if labels[u].single]
        if singles:
            t[v] = singles[0]
    B_star = frozenset(t.values())

    checks = None
    if terminated:
        checks = {
            "T_v members single xor double": all(
                labels[u].single != labels[u].double for v in B_bar for u in rep.T[v]
            ),
            "at most one single per T_v": all(
                sum(labels[u].single for u in rep.T[v]) <= 1 for v in B_bar
            ),
            "t defined on B": set(t) == set(B),
            "t injective": len(B_star) == len(t),
        }
    return Classification(epsilon, delta, s, P, labels, B_bar, C, D, B, B_star, t, checks)


# -- constants -------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed rational interval; enough arithmetic to certify the constant inequalities."""

    lo: Fraction
    hi: Fraction

    @staticmethod
    def of(x) -> Interval:
        if isinstance(x, Interval):
            return x
        x = Fraction(x)
        return Interval(x, x)

    def __add__(self, other):
        o = Interval.of(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-Interval.of(other))

    def __rsub__(self, other):
        return Interval.of(other) - self

    def __mul__(self, other):
        o = Interval.of(other)
        p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Interval.of(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return Interval.of(other) / self


def sqrt_interval(x: Fraction, bits: int = 256) -> Interval:
    p, q = x.numerator, x.denominator
    r = math.isqrt(p * q * 4**bits)
    scale = q * 2**bits
    return Interval(Fraction(r, scale), Fraction(r + 1, scale))


_OPS: dict[str, Callable] = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}


def _certify(lhs, op: str, rhs) -> bool | None:
    """Exact verdict for rationals; for intervals True/False when certain, None otherwise."""
    if not isinstance(lhs, Interval) and not isinstance(rhs, Interval):
        return _OPS[op](lhs, rhs)
    a, b = Interval.of(lhs), Interval.of(rhs)
    if op in ("<", "<="):
        a, b, op = b, a, ">" if op == "<" else ">="
    if _OPS[op](a.lo, b.hi):
        return True
    if op == ">" and a.hi <= b.lo or op == ">=" and a.hi < b.lo:
        return False
    return None


def _inequalities(s, e, dl, d) -> dict[str, Callable[[], list[tuple]]]:
    r = Fraction
    return {
        "(1)": lambda: [(4 - 2 * (6 - 9 * s) / (4 - 10 * s) - 9 * s, ">=", r(49, 50))],
        "(2)": lambda: [(9 * (4 * s + 5 * e), "<", 1)],
        "(3)": lambda: [(
            (1 + s) * (1 - dl - r(25, 12) * e * dl) + r(3 * d, 4) * (dl + r(25, 12) * e * dl) + e * dl,
            "<=",
            (d - e * dl) / 2,
        )],
        "(4)": lambda: [(36 * s + 45 * e, "<=", r(1, 32))],
        "(5)": lambda: [(0, "<", e), (e, "<", r(16, 100)), (r(16, 100), "<", r(1, 4))],
        "(6)": lambda: [(1 - 3 * s, ">", r(1, 2))],
        "(7)": lambda: [(1 + s, "<", r(3 * d, 4))],
        "(8)": lambda: [(4 * (1 - r(3, 2) * s) * (1 - s), ">=", 3), (3, ">", r(149, 50))],
        "(9)": lambda: [(49 * (1 - e) / 100, ">=", r(12, 25))],
        "(10)": lambda: [((2 - 10 * s) * (6 - 9 * s) / (4 - 10 * s), ">=", r(149, 50))],
        "(11)": lambda: [
            (2 - 10 * s, "<=", 6 - 9 * s),
            (2 - 10 * s, "<=", 4 - 10 * s),
            (2 - 10 * s, ">", 0),
        ],
    }


@dataclass(frozen=True)
class ConstantsReport:
    epsilon: Fraction
    delta: Fraction
    d: int
    exact: bool  # False: sqrt(epsilon) irrational, verdicts certified by interval arithmetic
    results: dict[str, bool | None]  # None: interval evaluation could not decide
    epsilon_delta: Fraction
    guarantee: Fraction  # d/2 - epsilon*delta/2

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results.values() if r is True)

    @property
    def all_pass(self) -> bool:
        return all(r is True for r in self.results.values())


def verify_constants(
    epsilon: Fraction = DEFAULT_EPSILON,
    delta: Fraction = DEFAULT_DELTA,
    d: int = 3,
) -> ConstantsReport:
    """Evaluate the eleven inequalities the analysis needs from ``epsilon`` and ``delta``."""
    e, dl = Fraction(epsilon), Fraction(delta)
    if d < 3:
        raise InputError(f"the d-dependent inequalities need d >= 3, got {d}")
    if e < 0:
        raise InputError("epsilon must be nonnegative")
    s = rational_sqrt(e)
    exact = s is not None
    if s is None:
        s = sqrt_interval(e)
    results: dict[str, bool | None] = {}
    for name, build in _inequalities(s, e, dl, d).items():
        try:
            comparisons = build()
        except ZeroDivisionError:
            results[name] = None if not exact else False
            continue
        verdicts = [_certify(lhs, op, rhs) for lhs, op, rhs in comparisons]
        if any(v is False for v in verdicts):
            results[name] = False
        elif all(v is True for v in verdicts):
            results[name] = True
        else:
            results[name] = None
    return ConstantsReport(e, dl, d, exact, results, e * dl, Fraction(d, 2) - e * dl / 2)
