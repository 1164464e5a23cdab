"""Feasibility of a GDoF tuple via potentials on a labeled multi-digraph.

Nodes are a source ``u`` and one node ``v_k`` per user. A tuple is
achievable with layered power control iff the graph has no directed circuit
of negative length; shortest-path distances from ``u`` then give the base
power exponents of the basic messages.

Arithmetic is generic: lengths may be Fractions or (after scaling by a
common denominator) plain ints, which is what the bulk oracle scan uses.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .netmodel import GdofTuple, NetworkSpec, PowerAllocation, check_tuple, format_rational

SOURCE = 0


def node(k: int) -> int:
    """Graph node of user ``k`` (node 0 is the source)."""
    return k + 1


def node_name(n: int) -> str:
    return "u" if n == SOURCE else f"v{n}"


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    label: Optional[int]  # state index, None for source arcs
    length: Fraction

    def to_doc(self) -> dict:
        return {
            "tail": node_name(self.tail),
            "head": node_name(self.head),
            "state": None if self.label is None else self.label + 1,
            "length": format_rational(self.length),
        }


@dataclass(frozen=True)
class PotentialGraph:
    users: int
    arcs: tuple[Arc, ...]

    @property
    def nodes(self) -> list[int]:
        return list(range(self.users + 1))

    def collapsed(self) -> dict[tuple[int, int], Arc]:
        """Shortest parallel arc per (tail, head); ties keep the smallest label."""
        best = collapse((a.tail, a.head, a.label, a.length) for a in self.arcs)
        return {pair: Arc(*arc) for pair, arc in best.items()}

    def length(self, tail: int, head: int, label: Optional[int]) -> Fraction:
        for a in self.arcs:
            if (a.tail, a.head, a.label) == (tail, head, label):
                return a.length
        raise KeyError((tail, head, label))


@dataclass(frozen=True)
class NegativeCircuit:
    arcs: tuple[Arc, ...]

    @property
    def length(self) -> Fraction:
        return sum((a.length for a in self.arcs), Fraction(0))

    def describe(self) -> str:
        parts = [node_name(self.arcs[0].tail)]
        for a in self.arcs:
            arrow = "->" if a.label is None else f"-[{a.label + 1}]->"
            parts.append(f"{arrow}{node_name(a.head)}")
        return "".join(parts)

    def to_doc(self) -> dict:
        return {"arcs": [a.to_doc() for a in self.arcs], "length": format_rational(self.length),
                "text": self.describe()}


@dataclass(frozen=True)
class Feasible:
    allocation: PowerAllocation
    feasible = True


@dataclass(frozen=True)
class Infeasible:
    circuit: NegativeCircuit
    feasible = False


FeasibilityVerdict = Union[Feasible, Infeasible]


def arc_lengths(alpha, pi, load, K: int, M: int):
    """Yield ``(tail, head, label, length)`` in deterministic order.

    ``alpha[m][k][i]`` exponents, ``pi[k][m]`` thresholds and
    ``load[k][t]`` = sum of the first ``t`` GDoF values of user ``k``.
    """
    for k in range(K):
        yield SOURCE, node(k), None, 0
    for k in range(K):
        for m in range(M):
            back = alpha[m][k][k] - load[k][pi[k][m]]
            yield node(k), SOURCE, m, back
            for j in range(K):
                if j != k:
                    yield node(k), node(j), m, back - alpha[m][k][j]


def loads(t: GdofTuple) -> list[list[Fraction]]:
    out = []
    for row in t.d:
        acc = [Fraction(0)]
        for v in row:
            acc.append(acc[-1] + v)
        out.append(acc)
    return out


def build_graph(spec: NetworkSpec, t: GdofTuple) -> PotentialGraph:
    check_tuple(spec, t)
    arcs = tuple(Arc(a, b, m, Fraction(length))
                 for a, b, m, length in arc_lengths(spec.alpha, spec.pi, loads(t), spec.users, spec.states))
    return PotentialGraph(spec.users, arcs)


def shortest_paths(n_nodes: int, edges: Sequence[tuple[int, int, object]]):
    """Bellman-Ford from node 0 over ``edges`` = (tail, head, length).

    Returns ``(dist, None)`` or ``(None, cycle)`` where ``cycle`` is the node
    sequence of a negative circuit found by predecessor tracing after the
    final relaxation round.
    """
    dist: list = [None] * n_nodes
    pred = [-1] * n_nodes
    dist[0] = 0
    changed = -1
    for _ in range(n_nodes):
        changed = -1
        for a, b, w in edges:
            da = dist[a]
            if da is None:
                continue
            cand = da + w
            db = dist[b]
            if db is None or cand < db:
                dist[b] = cand
                pred[b] = a
                changed = b
        if changed < 0:
            return dist, None
    # still relaxing after n rounds: walk back n steps to land on the cycle
    x = changed
    for _ in range(n_nodes):
        x = pred[x]
    cycle = [x]
    y = pred[x]
    while y != x:
        cycle.append(y)
        y = pred[y]
    cycle.reverse()
    return None, cycle


def collapse(arcs) -> dict[tuple[int, int], tuple]:
    """Shortest parallel arc per (tail, head) from ``(tail, head, label,
    length)`` tuples; ties keep the first, i.e. the smallest label."""
    best: dict[tuple[int, int], tuple] = {}
    for arc in arcs:
        cur = best.get(arc[:2])
        if cur is None or arc[3] < cur[3]:
            best[arc[:2]] = arc
    return best


def solve(alpha, pi, load, K: int, M: int):
    """Shortest paths from the source on the collapsed graph.

    Returns ``(dist, None)`` when feasible, else ``(None, circuit)`` with the
    circuit as a list of ``(tail, head, label, length)`` arcs starting at its
    smallest node.
    """
    best = collapse(arc_lengths(alpha, pi, load, K, M))
    # deterministic relaxation order: by head, then tail
    edges = [(a, b, arc[3]) for (a, b), arc in sorted(best.items(), key=lambda e: (e[0][1], e[0][0]))]
    dist, cycle = shortest_paths(K + 1, edges)
    if cycle is None:
        return dist, None
    start = cycle.index(min(cycle))
    cycle = cycle[start:] + cycle[:start]
    return None, [best[(a, b)] for a, b in zip(cycle, cycle[1:] + cycle[:1])]


def decide_feasibility(spec: NetworkSpec, t: GdofTuple) -> FeasibilityVerdict:
    check_tuple(spec, t)
    dist, circuit = solve(spec.alpha, spec.pi, loads(t), spec.users, spec.states)
    if circuit is not None:
        return Infeasible(NegativeCircuit(tuple(Arc(a, b, m, Fraction(w)) for a, b, m, w in circuit)))
    base = [Fraction(dist[node(k)]) for k in range(spec.users)]
    return Feasible(PowerAllocation.layered(base, t))


def constraints(spec: NetworkSpec, t: GdofTuple):
    """Every linear constraint on the base exponents ``r`` as
    ``(name, coeffs {user: +-1}, bound)``. ``cap`` constraints read
    ``r_k <= 0``; all others read ``sum coeffs * r >= bound``."""
    yield from _constraints(spec.alpha, spec.pi, loads(t), spec.users, spec.states)


def _constraints(alpha, pi, load, K: int, M: int):
    for k in range(K):
        yield ("cap", k, None, None), {k: 1}, 0
    for k in range(K):
        for m in range(M):
            need = load[k][pi[k][m]] - alpha[m][k][k]
            yield ("floor", k, None, m), {k: 1}, need
            for j in range(K):
                if j != k:
                    yield ("pair", k, j, m), {k: 1, j: -1}, need + alpha[m][k][j]


def _violations(alpha, pi, load, K: int, M: int, r) -> list[tuple]:
    bad = []
    for name, coeffs, bound in _constraints(alpha, pi, load, K, M):
        value = sum(c * r[k] for k, c in coeffs.items())
        ok = value <= bound if name[0] == "cap" else value >= bound
        if not ok:
            bad.append(name)
    return bad


def violated_constraints(spec: NetworkSpec, t: GdofTuple, alloc: PowerAllocation) -> list[tuple]:
    """Names of the base-exponent constraints ``alloc`` breaks, e.g.
    ``("pair", k, j, m)`` for ``r_k - r_j >= ...`` in state ``m``."""
    return _violations(spec.alpha, spec.pi, loads(t), spec.users, spec.states, alloc.base)


def verify_certificate(spec: NetworkSpec, t: GdofTuple, alloc: PowerAllocation) -> bool:
    if len(alloc.r) != spec.users:
        return False
    return not violated_constraints(spec, t, alloc)


def circuit_is_valid(graph: PotentialGraph, circuit: NegativeCircuit) -> bool:
    """Arcs chain head-to-tail, close up, exist in ``graph`` and sum below 0."""
    arcs = circuit.arcs
    if not arcs:
        return False
    present = set(graph.arcs)
    chained = all(a.head == b.tail for a, b in zip(arcs, arcs[1:] + arcs[:1]))
    return chained and all(a in present for a in arcs) and circuit.length < 0
