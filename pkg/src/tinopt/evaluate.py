"""What an allocation actually delivers: asymptotic GDoF, finite-power SINRs
and rates, and the grid scan that cross-checks region membership against
potential feasibility."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional, Sequence

import numpy as np

from .netmodel import GdofTuple, NetworkSpec, PowerAllocation, common_denominator
from .potential import _violations, arc_lengths, solve
from .region import enumerate_region

DEFAULT_P_GRID = (1e4, 1e6, 1e8, 1e10)


def _qualifying(spec: NetworkSpec, k: int, m: int) -> list[int]:
    """States in which receiver ``k`` decodes order ``m`` (0-based)."""
    return [s for s in range(spec.states) if spec.pi[k][s] > m]


def achieved_gdof(spec: NetworkSpec, alloc: PowerAllocation) -> GdofTuple:
    K, M = spec.users, spec.states
    r = alloc.r
    rows = []
    for k in range(K):
        row = []
        for m in range(M):
            states = _qualifying(spec, k, m)
            if not states:
                row.append(Fraction(0))
                continue
            best = r[k][m] - r[k][m + 1]
            for s in states:
                interference = max([Fraction(0)] + [spec.a(k, i, s) + r[i][0] for i in range(K) if i != k])
                best = min(best, spec.a(k, k, s) + r[k][m] - interference)
            row.append(max(Fraction(0), best))
        rows.append(tuple(row))
    return GdofTuple(tuple(rows))


@dataclass
class RateReport:
    """Rates at one nominal power ``P`` (natural log units)."""

    P: float
    sinr: dict = field(default_factory=dict)  # (k, m) -> {state: SINR}
    rate: list = field(default_factory=list)  # [k][m]
    normalized: list = field(default_factory=list)  # [k][m], rate / log P


def _transmitted(spec: NetworkSpec, k: int) -> range:
    # orders no state of receiver k decodes carry no message and stay silent
    return range(spec.max_order(k))


def finite_p_report(spec: NetworkSpec, alloc: PowerAllocation,
                    P_grid: Sequence[float] = DEFAULT_P_GRID,
                    scaling: str = "minimal") -> list[RateReport]:
    """SINR and rate of every layer at each nominal power in ``P_grid``.

    Layer ``m`` of user ``i`` transmits at ``P**r[i][m] * c_i``. With
    ``scaling="minimal"`` the constant is ``c_i = 1 / max(1, sum_m P**r[i][m])``
    (the smallest back-off meeting the unit power budget); ``"uniform"``
    uses ``c_i = 1/M``. Either way the constant vanishes in ``rate / log P``.
    """
    if scaling not in ("minimal", "uniform"):
        raise ValueError(f"unknown scaling {scaling!r}")
    K, M = spec.users, spec.states
    r = [[float(v) for v in row] for row in alloc.r]
    out = []
    for P in P_grid:
        if not P > 1:
            raise ValueError(f"nominal power must exceed 1, got {P}")
        lnP = math.log(P)
        if scaling == "uniform":
            backoff = [math.log(M)] * K
        else:
            backoff = [max(0.0, float(np.logaddexp.reduce([r[i][n] * lnP for n in _transmitted(spec, i)])))
                       for i in range(K)]
        report = RateReport(P)
        for k in range(K):
            rates, norms = [], []
            for m in range(M):
                per_state = {}
                for s in _qualifying(spec, k, m):
                    a = [float(spec.a(k, i, s)) for i in range(K)]
                    signal = (a[k] + r[k][m]) * lnP - backoff[k]
                    terms = [0.0]
                    terms += [(a[k] + r[k][n]) * lnP - backoff[k] for n in _transmitted(spec, k) if n > m]
                    terms += [(a[i] + r[i][n]) * lnP - backoff[i]
                              for i in range(K) if i != k for n in _transmitted(spec, i)]
                    per_state[s] = float(signal - np.logaddexp.reduce(terms))
                if per_state:
                    rate = float(np.logaddexp(0.0, min(per_state.values())))
                else:
                    rate = 0.0
                report.sinr[(k, m)] = {s: math.exp(v) for s, v in per_state.items()}
                rates.append(rate)
                norms.append(rate / lnP)
            report.rate.append(rates)
            report.normalized.append(norms)
        out.append(report)
    return out


# ---------------------------------------------------------------------------
# region vs potential oracle
# ---------------------------------------------------------------------------

@dataclass
class ScanRecord:
    values: tuple[Fraction, ...]  # in spec.variables() order
    member: bool
    feasible: bool
    certified: bool = True


@dataclass
class ScanResult:
    records: list[ScanRecord]
    grid_size: int

    @property
    def disagreements(self) -> list[ScanRecord]:
        return [rec for rec in self.records if rec.member != rec.feasible]

    @property
    def uncertified(self) -> list[ScanRecord]:
        return [rec for rec in self.records if not rec.certified]

    @property
    def n_feasible(self) -> int:
        return sum(rec.feasible for rec in self.records)


def grid_points(n_vars: int, per_axis: int, cap: int, seed: int = 0) -> Iterator[tuple[int, ...]]:
    """Index vectors of the grid; the full grid in lexicographic order when it
    fits under ``cap``, else ``cap`` points drawn with ``seed`` and sorted."""
    total = per_axis ** n_vars
    if total <= cap:
        yield from product(range(per_axis), repeat=n_vars)
        return
    for flat in sorted(random.Random(seed).sample(range(total), cap)):
        idx = []
        for _ in range(n_vars):
            flat, rem = divmod(flat, per_axis)
            idx.append(rem)
        yield tuple(reversed(idx))


def _circuit_ok(alpha, pi, load, K, M, circuit) -> bool:
    present = set(arc_lengths(alpha, pi, load, K, M))
    chained = all(a[1] == b[0] for a, b in zip(circuit, circuit[1:] + circuit[:1]))
    return chained and all(a in present for a in circuit) and sum(a[3] for a in circuit) < 0


def oracle_membership_scan(spec: NetworkSpec, grid_step, cap: int = 100_000, seed: int = 0,
                           certify: bool = True, upper: Optional[Fraction] = None) -> ScanResult:
    """Compare region membership and potential feasibility on a grid over
    ``[0, upper]`` (default: largest exponent) for every deliverable variable.

    Everything is scaled by a common denominator and run on ints; both
    checks are homogeneous, so verdicts are unchanged.
    """
    step = Fraction(grid_step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    upper = spec.alpha_max() if upper is None else Fraction(upper)
    K, M = spec.users, spec.states
    variables = spec.variables()
    L = common_denominator(spec, [step])
    A = [[[int(v * L) for v in row] for row in state] for state in spec.alpha]
    unit = int(step * L)
    per_axis = int(upper // step) + 1
    position = {v: n for n, v in enumerate(variables)}
    rows = []
    for q in enumerate_region(spec):
        pos = [position[(k, m)] for k, cap_k in q.lhs for m in range(cap_k)]
        rows.append((pos, int(q.rhs * L)))

    records = []
    for idx in grid_points(len(variables), per_axis, cap, seed):
        vals = [g * unit for g in idx]
        member = all(sum(vals[p] for p in pos) <= rhs for pos, rhs in rows)
        d = [[0] * M for _ in range(K)]
        for (k, m), v in zip(variables, vals):
            d[k][m] = v
        load = []
        for row in d:
            acc = [0]
            for v in row:
                acc.append(acc[-1] + v)
            load.append(acc)
        dist, circuit = solve(A, spec.pi, load, K, M)
        feasible = circuit is None
        certified = True
        if certify:
            if feasible:
                certified = not _violations(A, spec.pi, load, K, M, dist[1:])
            else:
                certified = _circuit_ok(A, spec.pi, load, K, M, circuit)
        records.append(ScanRecord(tuple(g * step for g in idx), member, feasible, certified))
    return ScanResult(records, per_axis ** len(variables))
