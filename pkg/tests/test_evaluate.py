import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tinopt.evaluate import achieved_gdof, finite_p_report, grid_points, oracle_membership_scan
from tinopt.netmodel import GdofTuple, NetworkSpec, PowerAllocation
from tinopt.potential import decide_feasibility

from conftest import specs

F = Fraction


def test_example_achieved_gdof(example):
    t = GdofTuple.from_flat(example, ["2", "0.3", "0.2", "0.4", "0.2"])
    alloc = decide_feasibility(example, t).allocation
    assert achieved_gdof(example, alloc).d == ((2, 0), (F(3, 10), F(2, 5)), (F(1, 5), F(1, 5)))


def test_single_link_rate():
    spec = NetworkSpec.build([[["1"]]], [[1]])
    alloc = PowerAllocation(((F(0), F(-1)),))
    (rep,) = finite_p_report(spec, alloc, [1e6])
    assert rep.sinr[(0, 0)][0] == pytest.approx(1e6, rel=1e-12)
    assert rep.rate[0][0] == pytest.approx(math.log1p(1e6), rel=1e-12)
    assert rep.normalized[0][0] == pytest.approx(math.log1p(1e6) / math.log(1e6), rel=1e-12)


def test_two_user_two_layer_rates_by_hand():
    # user 1 sends two layers, user 2 one; both receivers in a single state
    spec = NetworkSpec.build([[["1", "0.5"], ["0.25", "1"]]], [[1], [1]])
    spec = NetworkSpec(2, 2, (spec.alpha[0], spec.alpha[0]), ((1, 2), (1, 1)))
    alloc = PowerAllocation(((F(0), F(-1, 4), F(-1, 2)), (F(-1, 10), F(-1, 2), F(-1, 2))))
    P = 1e4
    (rep,) = finite_p_report(spec, alloc, [P])
    c1 = 1 / (1 + P ** -0.25)  # user 1 backs off to meet its budget
    c2 = 1.0
    tx1 = [c1, c1 * P ** -0.25]
    tx2 = [c2 * P ** -0.1]  # user 2's second order is never decoded, so silent
    # receiver 1 decodes layer 1 treating its own layer 2 and user 2 as noise
    sinr11 = P * tx1[0] / (1 + P * tx1[1] + P ** 0.5 * tx2[0])
    sinr12 = P * tx1[1] / (1 + P ** 0.5 * tx2[0])
    sinr21 = P * tx2[0] / (1 + P ** 0.25 * (tx1[0] + tx1[1]))
    for key, ref in [((0, 0), sinr11), ((0, 1), sinr12), ((1, 0), sinr21)]:
        assert rep.sinr[key][1 if key == (0, 1) else 0] == pytest.approx(ref, rel=1e-9)
    assert rep.rate[1][1] == 0.0
    assert rep.rate[0][1] == pytest.approx(math.log1p(sinr12), rel=1e-9)


def test_uniform_scaling_costs_a_constant(example):
    t = GdofTuple.from_flat(example, ["2", "0.3", "0.2", "0.4", "0.2"])
    alloc = decide_feasibility(example, t).allocation
    (minimal,) = finite_p_report(example, alloc, [1e8])
    (uniform,) = finite_p_report(example, alloc, [1e8], scaling="uniform")
    assert uniform.rate[0][0] < minimal.rate[0][0]
    with pytest.raises(ValueError):
        finite_p_report(example, alloc, [1e8], scaling="loud")
    with pytest.raises(ValueError):
        finite_p_report(example, alloc, [1.0])


@settings(max_examples=60, deadline=None)
@given(specs(users=(1, 3), states=(1, 2)), st.data())
def test_rates_reach_certified_gdof(spec, data):
    values = [F(data.draw(st.integers(0, 10)), 10) for _ in spec.variables()]
    t = GdofTuple.from_flat(spec, values)
    verdict = decide_feasibility(spec, t)
    if not verdict.feasible:
        return
    achieved = achieved_gdof(spec, verdict.allocation)
    assert achieved.dominates(t)
    (rep,) = finite_p_report(spec, verdict.allocation, [1e40])
    for k, m in spec.variables():
        # the last layer may also use the headroom above the floor, so the
        # asymptotic value is a lower bound up to an O(log(KM) / log P) offset
        assert rep.normalized[k][m] >= float(achieved.d[k][m]) - 0.05


def test_grid_points_full_and_sampled():
    assert list(grid_points(2, 3, cap=100)) == [(a, b) for a in range(3) for b in range(3)]
    sample = list(grid_points(3, 10, cap=50, seed=4))
    assert len(sample) == 50 == len(set(sample)) and sample == sorted(sample)
    assert sample == list(grid_points(3, 10, cap=50, seed=4))


def test_example_oracle_scan(example):
    result = oracle_membership_scan(example, F(1, 2))
    assert result.grid_size == len(result.records) == 5 ** 5
    assert not result.disagreements and not result.uncertified
    assert 0 < result.n_feasible < len(result.records)
    assert result.records[0].values == (0,) * 5 and result.records[0].feasible
