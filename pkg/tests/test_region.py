from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from tinopt.netmodel import GdofTuple, NetworkSpec
from tinopt.region import (
    Cycle,
    Individual,
    Inequality,
    cyclic_sequences,
    enumerate_region,
    implies,
    is_member,
    mixed_state_region,
    raw_count,
    region_via_mixed_states,
    remove_redundant,
    same_polyhedron,
)

from conftest import bound, specs


@pytest.mark.parametrize("K", [2, 3, 4, 5])
def test_cyclic_sequences_match_graph_cycles(K):
    graph = nx.complete_graph(K, create_using=nx.DiGraph)
    cycles = list(nx.simple_cycles(graph))
    for n in range(2, K + 1):
        ours = cyclic_sequences(range(K), n)
        theirs = {tuple(c) for c in cycles if len(c) == n}
        # rotate each graph cycle so the smallest user leads
        canon = {c[c.index(min(c)):] + c[:c.index(min(c))] for c in theirs}
        assert set(ours) == canon and len(ours) == len(canon)


@pytest.mark.parametrize("K, M", [(1, 1), (2, 1), (2, 3), (3, 2), (4, 2)])
def test_raw_count_matches_enumeration(K, M):
    graph = nx.complete_graph(K, create_using=nx.DiGraph)
    expected = K * M + sum(M ** len(c) for c in nx.simple_cycles(graph))
    assert raw_count(K, M) == expected
    alpha = [[["1"] * K for _ in range(K)] for _ in range(M)]
    spec = NetworkSpec.build(alpha, [[1] * M for _ in range(K)])
    assert len(enumerate_region(spec)) == expected


def test_example_raw_region(example):
    raw = enumerate_region(example)
    assert len(raw) == 34
    cyc = [q for q in raw if q.provenance == Cycle((0, 1, 2), (0, 1, 1))]
    assert len(cyc) == 1
    # (2 - 0.2) + (1 - 0.5) + (2 - 0.6)
    assert cyc[0].key() == bound("d_1 + d_2 + d_3 + Δd_3 <= 3.7").key()
    ind = [q for q in raw if q.provenance == Individual(1, 0)]
    assert ind[0].key() == bound("d_2 + Δd_2 <= 1.5").key()
    assert ind[0].describe() == "d2[1] + d2[2] <= 1.5"


def test_superset_rule_drops_weaker_single_term():
    kept = remove_redundant([bound("d_1 <= 2"), bound("d_1 + d_2 <= 2")])
    assert [q.key() for q in kept] == [bound("d_1 + d_2 <= 2").key()]


def test_lp_certified_redundancy():
    # d1 + d2 <= 3 follows from d1 <= 1 and d2 <= 1
    system = [bound("d_1 <= 1"), bound("d_2 <= 1"), bound("d_1 + d_2 <= 3")]
    kept = remove_redundant(system)
    assert {q.key() for q in kept} == {bound("d_1 <= 1").key(), bound("d_2 <= 1").key()}
    assert implies(kept, bound("d_1 + d_2 <= 2"))
    assert not implies(kept, bound("d_1 + d_2 <= 1.9"))


def test_duplicates_keep_tightest():
    kept = remove_redundant([bound("d_1 <= 2"), bound("d_1 <= 1.5")])
    assert [q.rhs for q in kept] == [Fraction(3, 2)]


def test_membership_reports_violated_bound(example):
    raw = enumerate_region(example)
    inside = GdofTuple.from_flat(example, ["2", "0.3", "0.2", "0.4", "0.2"])
    assert is_member(raw, inside, example) == (True, None)
    outside = GdofTuple.from_flat(example, ["2.1", "0", "0", "0", "0"])
    ok, bad = is_member(raw, outside, example)
    assert not ok and bad.key() == bound("d_1 <= 2").key()
    negative = GdofTuple(((Fraction(-1), 0), (0, 0), (0, 0)))
    assert is_member(raw, negative, example) == (False, None)


def test_example_mixed_state_lists(example):
    # state 1 everywhere: every receiver sees its first-state row
    got = {q.key() for q in mixed_state_region(example, (0, 0, 0))}
    expected = {bound(t).key() for t in [
        "d_1 <= 2", "d_2 + Δd_2 <= 1.5", "d_3 <= 1.5", "d_1 + d_2 + Δd_2 <= 2.7",
        "d_1 + d_3 <= 2.4", "d_2 + Δd_2 + d_3 <= 1.9", "d_1 + d_2 + Δd_2 + d_3 <= 2.9",
    ]}
    assert got == expected


@settings(max_examples=40, deadline=None)
@given(specs(users=(1, 3), states=(1, 2)))
def test_mixed_state_union_is_the_same_region(spec):
    assert same_polyhedron(enumerate_region(spec), region_via_mixed_states(spec))


@settings(max_examples=40, deadline=None)
@given(specs(users=(2, 3), states=(1, 2)))
def test_minimal_region_is_equivalent_and_irredundant(spec):
    raw = enumerate_region(spec)
    kept = remove_redundant(raw)
    assert same_polyhedron(raw, kept)
    for q in kept:
        assert not implies([p for p in kept if p is not q], q)


@settings(max_examples=100, deadline=None)
@given(specs(users=(2, 3), states=(1, 2)), st.data())
def test_minimal_and_raw_membership_agree(spec, data):
    raw = enumerate_region(spec)
    kept = remove_redundant(raw)
    values = [data.draw(st.integers(0, 20)) / Fraction(10) for _ in spec.variables()]
    t = GdofTuple.from_flat(spec, values)
    assert is_member(raw, t, spec)[0] == is_member(kept, t, spec)[0]


@settings(max_examples=60, deadline=None)
@given(specs(users=(1, 4), states=(1, 3), pi_one=True))
def test_single_threshold_only_touches_basic_messages(spec):
    assert all(cap == 1 for q in enumerate_region(spec) for _, cap in q.lhs)
    assert spec.variables() == [(k, 0) for k in range(spec.users)]


def test_inequality_document(example):
    q = enumerate_region(example)[0]
    doc = q.to_doc()
    assert doc["text"] == q.describe()
    assert doc["provenance"]["kind"] in ("individual", "cycle")
    assert Inequality(q.lhs, q.rhs).to_doc().get("provenance") is None
