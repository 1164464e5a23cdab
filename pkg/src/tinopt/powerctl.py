"""Decoding thresholds from TIN capability, and layered power allocation
through an auxiliary single-state network."""
from __future__ import annotations

from fractions import Fraction

from .netmodel import GdofTuple, NetworkSpec, PowerAllocation, mixed_state_alpha
from .potential import Feasible, NegativeCircuit, decide_feasibility, verify_certificate


class InfeasibleAggregate(ValueError):
    """The aggregated tuple has a negative circuit in the auxiliary network."""

    def __init__(self, circuit: NegativeCircuit):
        self.circuit = circuit
        super().__init__(f"aggregate tuple infeasible in auxiliary network: "
                         f"{circuit.describe()} has length {circuit.length}")


class UncertifiedAllocation(ValueError):
    """Auxiliary-network allocation fails a constraint of the original network."""


def capability(spec: NetworkSpec) -> list[list[Fraction]]:
    """``cap[k][m]``: direct exponent minus strongest interferer at receiver
    ``k`` in state ``m`` (no interferer counts as 0)."""
    K = spec.users
    return [[spec.a(k, k, m) - max((spec.a(k, j, m) for j in range(K) if j != k), default=Fraction(0))
             for m in range(spec.states)] for k in range(K)]


def natural_pi(spec: NetworkSpec) -> list[list[int]]:
    cap = capability(spec)
    return [[sum(1 for c in row if c < row[m]) + 1 for m in range(spec.states)] for row in cap]


def best_states(spec: NetworkSpec) -> tuple[int, ...]:
    # max() keeps the first maximum, i.e. the smallest state index on ties
    return tuple(max(range(spec.states), key=lambda m: row[m]) for row in capability(spec))


def auxiliary_network(spec: NetworkSpec) -> NetworkSpec:
    """One-state network where each receiver sits in its best state."""
    A = mixed_state_alpha(spec, best_states(spec))
    return NetworkSpec(spec.users, 1, (tuple(tuple(row) for row in A),),
                       tuple((1,) for _ in range(spec.users)))


def allocate(spec: NetworkSpec, t: GdofTuple) -> PowerAllocation:
    aux = auxiliary_network(spec)
    total = GdofTuple(tuple((sum(row, Fraction(0)),) for row in t.d))
    verdict = decide_feasibility(aux, total)
    if not isinstance(verdict, Feasible):
        raise InfeasibleAggregate(verdict.circuit)
    alloc = PowerAllocation.layered(verdict.allocation.base, t)
    if not verify_certificate(spec, t, alloc):
        raise UncertifiedAllocation("auxiliary-state allocation does not satisfy every state "
                                    "of the original network")
    return alloc
