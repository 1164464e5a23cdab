from fractions import Fraction

import networkx as nx
from hypothesis import given, settings, strategies as st

from tinopt.netmodel import GdofTuple, PowerAllocation
from tinopt.potential import (
    SOURCE,
    Feasible,
    Infeasible,
    build_graph,
    circuit_is_valid,
    collapse,
    decide_feasibility,
    node,
    verify_certificate,
    violated_constraints,
)

from conftest import specs

F = Fraction


def extreme_point(spec):
    return GdofTuple.from_flat(spec, ["2", "0.3", "0.2", "0.4", "0.2"])


def test_example_arc_lengths(example):
    g = build_graph(example, extreme_point(example))
    # state 2 at receiver 2: 1 - 0.3 (only the basic message is decoded) - 0.5
    assert g.length(node(1), node(0), 1) == F(1, 5)
    assert g.length(node(0), SOURCE, 0) == 0
    assert g.length(SOURCE, node(2), None) == 0
    # 3 source arcs + per (user, state) one arc to u and two to other users
    assert len(g.arcs) == 3 + 3 * 2 * 3


def test_collapse_prefers_shortest_then_smallest_label():
    arcs = [(1, 0, 0, F(2)), (1, 0, 1, F(1)), (2, 0, 0, F(3)), (2, 0, 1, F(3))]
    best = collapse(arcs)
    assert best[(1, 0)] == (1, 0, 1, F(1))
    assert best[(2, 0)] == (2, 0, 0, F(3))


def test_example_extreme_point_certificate(example):
    t = extreme_point(example)
    verdict = decide_feasibility(example, t)
    assert isinstance(verdict, Feasible) and verdict.feasible
    assert verdict.allocation.r == (
        (0, -2, -2),
        (F(-1, 5), F(-1, 2), F(-9, 10)),
        (-1, F(-6, 5), F(-7, 5)),
    )
    assert verify_certificate(example, t, verdict.allocation)


def test_too_much_basic_gdof_gives_self_loop_circuit(example):
    t = GdofTuple.from_flat(example, ["2.1", "0", "0", "0", "0"])
    verdict = decide_feasibility(example, t)
    assert isinstance(verdict, Infeasible) and not verdict.feasible
    assert verdict.circuit.describe() == "u->v1-[1]->u"
    assert verdict.circuit.length == F(-1, 10)
    assert circuit_is_valid(build_graph(example, t), verdict.circuit)


def test_full_power_everywhere_breaks_user_one_pairs(example):
    t = extreme_point(example)
    flat = PowerAllocation(tuple((F(0),) * 3 for _ in range(3)))
    assert violated_constraints(example, t, flat) == [
        ("pair", 0, 1, 0), ("pair", 0, 2, 0), ("pair", 0, 1, 1), ("pair", 0, 2, 1),
    ]
    assert not verify_certificate(example, t, flat)


def _nx_graph(graph):
    g = nx.MultiDiGraph()
    g.add_nodes_from(graph.nodes)
    for a in graph.arcs:
        g.add_edge(a.tail, a.head, weight=a.length)
    return g


@st.composite
def spec_and_tuple(draw):
    spec = draw(specs(users=(1, 3), states=(1, 3)))
    values = [F(draw(st.integers(0, 12)), 10) for _ in spec.variables()]
    return spec, GdofTuple.from_flat(spec, values)


@settings(max_examples=200, deadline=None)
@given(spec_and_tuple())
def test_verdict_matches_reference_shortest_paths(case):
    spec, t = case
    graph = build_graph(spec, t)
    reference = _nx_graph(graph)
    verdict = decide_feasibility(spec, t)
    assert verdict.feasible != nx.negative_edge_cycle(reference)
    if verdict.feasible:
        dist = nx.single_source_bellman_ford_path_length(reference, SOURCE)
        assert list(verdict.allocation.base) == [dist[node(k)] for k in range(spec.users)]
        assert verify_certificate(spec, t, verdict.allocation)
    else:
        assert circuit_is_valid(graph, verdict.circuit)
        assert verdict.circuit.arcs[0].tail == min(a.tail for a in verdict.circuit.arcs)


@settings(max_examples=100, deadline=None)
@given(spec_and_tuple(), st.integers(0, 2), st.integers(1, 5))
def test_raising_a_base_exponent_breaks_the_certificate(case, k, bump):
    # shortest-path potentials are the largest feasible base exponents
    spec, t = case
    verdict = decide_feasibility(spec, t)
    if not verdict.feasible or k >= spec.users:
        return
    base = list(verdict.allocation.base)
    base[k] += F(bump, 100)
    assert not verify_certificate(spec, t, PowerAllocation.layered(base, t))
