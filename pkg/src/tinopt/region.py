"""GDoF region as explicit linear inequalities.

Every bound has the form ``sum over users k of (d_k^[1] + ... + d_k^[t_k]) <= rhs``,
so an inequality is stored as the list of ``(user, order cap)`` pairs it
touches. Two families are emitted: per-user individual bounds (one per
state) and cycle bounds (one per directed cycle of users and per
assignment of a state to every user on the cycle).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Iterable, Optional, Sequence, Union

from . import lp
from .netmodel import (
    GdofTuple,
    InstanceTooLarge,
    NetworkSpec,
    SpecError,
    check_tuple,
    format_rational,
    mixed_state_alpha,
    mixed_states,
)

DEFAULT_CAP = 10 ** 7
MIXED_STATE_LIMIT = 10 ** 6

Lhs = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Individual:
    k: int
    state: int


@dataclass(frozen=True)
class Cycle:
    sequence: tuple[int, ...]
    states: tuple[int, ...]


@dataclass(frozen=True)
class Inequality:
    lhs: Lhs
    rhs: Fraction
    provenance: Union[Individual, Cycle, None] = None

    def key(self) -> tuple[Lhs, Fraction]:
        return (self.lhs, self.rhs)

    def value(self, t: GdofTuple) -> Fraction:
        return sum((t.partial(k, cap) for k, cap in self.lhs), Fraction(0))

    def holds(self, t: GdofTuple) -> bool:
        return self.value(t) <= self.rhs

    def coefficients(self, variables: Sequence[tuple[int, int]]) -> list[int]:
        caps = dict(self.lhs)
        return [1 if k in caps and m < caps[k] else 0 for k, m in variables]

    def describe(self) -> str:
        terms = []
        for k, cap in self.lhs:
            terms.extend(f"d{k + 1}[{m + 1}]" for m in range(cap))
        return " + ".join(terms) + f" <= {format_rational(self.rhs)}"

    def to_doc(self) -> dict:
        doc = {
            "lhs": [{"user": k + 1, "orders": cap} for k, cap in self.lhs],
            "rhs": format_rational(self.rhs),
            "text": self.describe(),
        }
        p = self.provenance
        if isinstance(p, Individual):
            doc["provenance"] = {"kind": "individual", "user": p.k + 1, "state": p.state + 1}
        elif isinstance(p, Cycle):
            doc["provenance"] = {"kind": "cycle", "sequence": [k + 1 for k in p.sequence],
                                 "states": [m + 1 for m in p.states]}
        return doc


def _sort(ineqs: Iterable[Inequality]) -> list[Inequality]:
    return sorted(ineqs, key=Inequality.key)


def cyclic_sequences(users: Sequence[int], length: int) -> list[tuple[int, ...]]:
    """Directed cycles on ``length`` distinct users, each listed once with its
    smallest user first."""
    out = []
    for subset in combinations(sorted(users), length):
        head, rest = subset[0], subset[1:]
        out.extend((head,) + p for p in permutations(rest))
    return out


def raw_count(K: int, M: int) -> int:
    return K * M + sum(comb(K, n) * factorial(n - 1) * M ** n for n in range(2, K + 1))


def _cycle_rhs(A_of, seq: Sequence[int], states: Sequence[int]) -> Fraction:
    total = Fraction(0)
    n = len(seq)
    for pos, (k, m) in enumerate(zip(seq, states)):
        nxt = seq[(pos + 1) % n]
        total += A_of(k, k, m) - A_of(k, nxt, m)
    return total


def enumerate_region(spec: NetworkSpec, cap: int = DEFAULT_CAP) -> list[Inequality]:
    K, M = spec.users, spec.states
    total = raw_count(K, M)
    if total > cap:
        raise InstanceTooLarge(f"{total} raw inequalities exceed cap {cap}")
    out = []
    for k in range(K):
        for m in range(M):
            out.append(Inequality(((k, spec.pi[k][m]),), spec.a(k, k, m), Individual(k, m)))
    for n in range(2, K + 1):
        for seq in cyclic_sequences(range(K), n):
            order = sorted(range(n), key=lambda p: seq[p])
            for states in product(range(M), repeat=n):
                lhs = tuple((seq[p], spec.pi[seq[p]][states[p]]) for p in order)
                out.append(Inequality(lhs, _cycle_rhs(spec.a, seq, states), Cycle(seq, states)))
    return _sort(out)


def single_state_region(A: Sequence[Sequence[Fraction]], caps: Sequence[int],
                        label: Optional[Sequence[int]] = None) -> list[Inequality]:
    """Individual and cycle bounds of a one-state network with exponent matrix
    ``A`` (receiver-major), where user ``k``'s message is the group of its
    first ``caps[k]`` orders."""
    K = len(A)
    label = tuple(label) if label is not None else (0,) * K
    a = lambda k, i, _m: A[k][i]  # noqa: E731
    out = [Inequality(((k, caps[k]),), A[k][k], Individual(k, label[k])) for k in range(K)]
    for n in range(2, K + 1):
        for seq in cyclic_sequences(range(K), n):
            lhs = tuple(sorted((k, caps[k]) for k in seq))
            out.append(Inequality(lhs, _cycle_rhs(a, seq, [0] * n),
                                  Cycle(seq, tuple(label[k] for k in seq))))
    return out


def mixed_state_region(spec: NetworkSpec, ms: Sequence[int]) -> list[Inequality]:
    """Deduplicated single-state region of one mixed state."""
    A = mixed_state_alpha(spec, ms)
    caps = [spec.pi[k][m] for k, m in enumerate(ms)]
    return deduplicate(single_state_region(A, caps, ms))


def region_via_mixed_states(spec: NetworkSpec) -> list[Inequality]:
    if spec.states ** spec.users > MIXED_STATE_LIMIT:
        raise InstanceTooLarge(f"{spec.states}^{spec.users} mixed states exceed {MIXED_STATE_LIMIT}")
    out = []
    for ms in mixed_states(spec):
        A = mixed_state_alpha(spec, ms)
        caps = [spec.pi[k][m] for k, m in enumerate(ms)]
        out.extend(single_state_region(A, caps, ms))
    return deduplicate(out)


# ---------------------------------------------------------------------------
# redundancy
# ---------------------------------------------------------------------------

def deduplicate(ineqs: Iterable[Inequality]) -> list[Inequality]:
    """Keep the tightest bound per left-hand side (first in canonical order on ties)."""
    best: dict[Lhs, Inequality] = {}
    for q in _sort(ineqs):
        if q.lhs not in best:
            best[q.lhs] = q
    return _sort(best.values())


def _covers(big: Lhs, small: Lhs) -> bool:
    caps = dict(big)
    return all(k in caps and caps[k] >= t for k, t in small)


def _variables_of(ineqs: Sequence[Inequality]) -> list[tuple[int, int]]:
    caps: dict[int, int] = {}
    for q in ineqs:
        for k, t in q.lhs:
            caps[k] = max(caps.get(k, 0), t)
    return [(k, m) for k in sorted(caps) for m in range(caps[k])]


def lp_bound(system: Sequence[Inequality], objective: Inequality,
             variables: Optional[Sequence[tuple[int, int]]] = None) -> lp.LPResult:
    """Maximize ``objective``'s left-hand side over ``system`` with d >= 0."""
    if variables is None:
        variables = _variables_of(list(system) + [objective])
    A = [q.coefficients(variables) for q in system]
    b = [q.rhs for q in system]
    return lp.maximize(objective.coefficients(variables), A, b)


def implies(system: Sequence[Inequality], target: Inequality,
            variables: Optional[Sequence[tuple[int, int]]] = None) -> bool:
    """Whether ``system`` together with d >= 0 implies ``target``."""
    res = lp_bound(system, target, variables)
    if res.status == lp.INFEASIBLE:
        return True
    if res.status == lp.UNBOUNDED:
        return False
    return res.value <= target.rhs


def same_polyhedron(a: Sequence[Inequality], b: Sequence[Inequality]) -> bool:
    variables = _variables_of(list(a) + list(b))
    return (all(implies(a, q, variables) for q in b)
            and all(implies(b, q, variables) for q in a))


def remove_redundant(ineqs: Sequence[Inequality]) -> list[Inequality]:
    """Minimal subsystem defining the same polyhedron (with d >= 0)."""
    current = deduplicate(ineqs)
    # cheap pass: a bound is implied by any other whose terms cover it and
    # whose right-hand side is no larger
    current = [q for q in current
               if not any(p.lhs != q.lhs and p.rhs <= q.rhs and _covers(p.lhs, q.lhs)
                          for p in current)]
    variables = _variables_of(current)
    kept = list(current)
    for q in current:
        others = [p for p in kept if p is not q]
        if others and implies(others, q, variables):
            kept = others
    return kept


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def is_member(ineqs: Sequence[Inequality], t: GdofTuple,
              spec: Optional[NetworkSpec] = None) -> tuple[bool, Optional[Inequality]]:
    """Whether ``t`` satisfies every bound and nonnegativity; returns the
    first violated bound (``None`` for a nonnegativity failure)."""
    if spec is not None:
        if len(t.d) != spec.users or any(len(row) != spec.states for row in t.d):
            raise SpecError(f"tuple must be {spec.users} x {spec.states}", "d")
        try:
            check_tuple(spec, t)
        except SpecError:
            return False, None
    elif any(v < 0 for row in t.d for v in row):
        return False, None
    for q in ineqs:
        for k, _cap in q.lhs:
            if k >= len(t.d):
                raise SpecError(f"tuple has no user {k + 1}", "d")
        if not q.holds(t):
            return False, q
    return True, None
