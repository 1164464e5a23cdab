"""TIN-optimality of a multi-state network.

A network is TIN-optimal when every receiver, in every one of its states,
sees its desired link at least as strong as the sum of its strongest
incoming interference (in that state) and the strongest interference its
own transmitter causes at any other receiver in any state.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .netmodel import InstanceTooLarge, NetworkSpec, format_rational, mixed_state_alpha, mixed_states

BRUTEFORCE_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Witness:
    """Violating quintuple: ``alpha[m_k][k][k] < alpha[m_j][j][k] + alpha[m_k][k][i]``."""

    k: int
    i: int
    j: int
    m_k: int
    m_j: int
    direct: Fraction
    caused: Fraction
    received: Fraction

    def key(self) -> tuple[int, int, int, int, int]:
        return (self.k, self.i, self.j, self.m_k, self.m_j)

    def violates(self, spec: NetworkSpec) -> bool:
        return (spec.a(self.k, self.k, self.m_k)
                < spec.a(self.j, self.k, self.m_j) + spec.a(self.k, self.i, self.m_k))

    def to_doc(self) -> dict:
        return {
            "k": self.k + 1, "i": self.i + 1, "j": self.j + 1,
            "m_k": self.m_k + 1, "m_j": self.m_j + 1,
            "direct": format_rational(self.direct),
            "caused": format_rational(self.caused),
            "received": format_rational(self.received),
        }


@dataclass(frozen=True)
class TinVerdict:
    holds: bool
    witness: Optional[Witness] = None


def _witness(spec: NetworkSpec, k: int, i: int, j: int, m_k: int, m_j: int) -> Witness:
    return Witness(k, i, j, m_k, m_j, spec.a(k, k, m_k), spec.a(j, k, m_j), spec.a(k, i, m_k))


def check_tin_optimality(spec: NetworkSpec) -> TinVerdict:
    K, M = spec.users, spec.states
    if K == 1:
        return TinVerdict(True)
    others = [[j for j in range(K) if j != k] for k in range(K)]
    # strongest interference transmitter k causes anywhere, and per-(k, m)
    # strongest interference seen by receiver k
    caused = [max(spec.a(j, k, m) for j in others[k] for m in range(M)) for k in range(K)]
    received = [[max(spec.a(k, i, m) for i in others[k]) for m in range(M)] for k in range(K)]

    for k in range(K):
        if all(spec.a(k, k, m) >= caused[k] + received[k][m] for m in range(M)):
            continue
        # lexicographically smallest (k, i, j, m_k, m_j) violating the condition
        for i in others[k]:
            slack = [spec.a(k, k, m) - spec.a(k, i, m) for m in range(M)]
            if min(slack) >= caused[k]:
                continue
            for j in others[k]:
                worst_j = max(spec.a(j, k, m) for m in range(M))
                if worst_j <= min(slack):
                    continue
                m_k = next(m for m in range(M) if slack[m] < worst_j)
                m_j = next(m for m in range(M) if spec.a(j, k, m) > slack[m_k])
                return TinVerdict(False, _witness(spec, k, i, j, m_k, m_j))
        raise AssertionError("violation located but no witness found")  # pragma: no cover
    return TinVerdict(True)


def _single_state_violations(A: list[list[Fraction]], ms: tuple[int, ...]):
    K = len(A)
    for k in range(K):
        for i in range(K):
            if i == k:
                continue
            for j in range(K):
                if j != k and A[k][k] < A[j][k] + A[k][i]:
                    yield (k, i, j, ms[k], ms[j])


def check_tin_optimality_bruteforce(spec: NetworkSpec) -> TinVerdict:
    """Check the single-state condition on every mixed state explicitly."""
    K, M = spec.users, spec.states
    if M ** K > BRUTEFORCE_LIMIT:
        raise InstanceTooLarge(f"{M}^{K} mixed states exceed {BRUTEFORCE_LIMIT}")
    best = None
    for ms in mixed_states(spec):
        A = mixed_state_alpha(spec, ms)
        ok = all(
            A[k][k] >= max((A[j][k] for j in range(K) if j != k), default=0)
            + max((A[k][i] for i in range(K) if i != k), default=0)
            for k in range(K)
        )
        if ok:
            continue
        first = min(_single_state_violations(A, ms))
        if best is None or first < best:
            best = first
    if best is None:
        return TinVerdict(True)
    return TinVerdict(False, _witness(spec, *best))
