"""Primitive layer: cost/penalty forms, their derivatives, and the ideal theft.

Frozen values below are hand computations from the closed forms, e.g.
C(0.5; k=1, q=1) = 1*0.5/0.5 = 1 and c'(0.5; 1, 1) = (1-0.5)**-2 = 4.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wagetheft import (
    Contract,
    CostSpec,
    MarketParams,
    PenaltySpec,
    cost,
    cost_curvature,
    expected_penalty,
    ideal_theft,
    inverse_marginal_cost,
    marginal_cost,
    marginal_raw_penalty,
    raw_penalty,
    worker_best_response,
)
from wagetheft.model import EFFORT_CAP

costs = st.builds(
    CostSpec,
    k=st.floats(0.05, 3.0),
    q=st.floats(0.1, 5.0),
)
penalties = st.builds(
    PenaltySpec,
    sigma=st.floats(0.1, 5.0),
    p=st.floats(1.05, 3.0),
)


class TestFrozenValues:
    def test_cost(self):
        assert cost(CostSpec(1, 1), 0.5) == pytest.approx(1.0, abs=0)
        assert cost(CostSpec(0.1, 3), 0.5) == pytest.approx(0.4, rel=1e-15)
        assert cost(CostSpec(2, 0.5), 0.0) == 0.0

    def test_marginal_cost(self):
        assert marginal_cost(CostSpec(1, 1), 0.5) == pytest.approx(4.0, rel=1e-15)
        assert marginal_cost(CostSpec(0.1, 3), 0.0) == pytest.approx(0.1, abs=0)
        # c'(0) = k for every q
        assert marginal_cost(CostSpec(2.5, 0.3), 0.0) == pytest.approx(2.5, abs=0)

    def test_curvature(self):
        # c''(0) = 2*k*q
        assert cost_curvature(CostSpec(1, 1), 0.0) == pytest.approx(2.0, rel=1e-15)
        assert cost_curvature(CostSpec(0.5, 3), 0.0) == pytest.approx(3.0, rel=1e-15)

    def test_inverse_marginal_cost(self):
        assert inverse_marginal_cost(CostSpec(1, 1), 4.0) == pytest.approx(0.5, abs=1e-11)
        assert inverse_marginal_cost(CostSpec(1, 1), 1.0) == 0.0
        assert inverse_marginal_cost(CostSpec(1, 1), 0.2) == 0.0

    def test_inverse_clamps_at_cap(self):
        a = inverse_marginal_cost(CostSpec(1, 0.1), 1e12)
        assert a == EFFORT_CAP

    def test_penalty(self):
        assert raw_penalty(PenaltySpec(1, 1.5), 4.0) == pytest.approx(8.0, rel=1e-15)
        assert expected_penalty(PenaltySpec(1, 1.5), 0.5, 4.0) == pytest.approx(4.0, rel=1e-15)
        assert marginal_raw_penalty(PenaltySpec(2, 2), 3.0) == pytest.approx(12.0, rel=1e-15)
        assert raw_penalty(PenaltySpec(3, 2), 0.0) == 0.0

    def test_ideal_theft(self):
        assert ideal_theft(PenaltySpec(1, 1.5), 0.5) == pytest.approx(16.0 / 9.0, rel=1e-15)
        assert ideal_theft(PenaltySpec(1, 1.5), 1.0) == pytest.approx(4.0 / 9.0, rel=1e-15)

    def test_ideal_theft_no_inspection_is_unbounded(self):
        assert ideal_theft(PenaltySpec(1, 1.5), 0.0) == math.inf

    def test_ideal_theft_overflow_is_unbounded(self):
        # base < 1 raised to a huge negative power overflows: treated as no
        # effective deterrence.
        assert ideal_theft(PenaltySpec(0.1, 1.000001), 1.0) == math.inf

    def test_ideal_theft_underflow_is_zero(self):
        assert ideal_theft(PenaltySpec(1e6, 1.000001), 1.0) == 0.0

    def test_worker_best_response(self):
        assert worker_best_response(CostSpec(1, 1), 5.0, 1.0) == pytest.approx(0.5, abs=1e-11)
        assert worker_best_response(CostSpec(1, 1), 2.0, 1.5) == 0.0
        assert worker_best_response(CostSpec(1, 1), 0.0, 3.0) == 0.0


class TestValidation:
    def test_market_params(self):
        with pytest.raises(ValueError):
            MarketParams(0, 50, 30, 200, 0.5)
        with pytest.raises(ValueError):
            MarketParams(10, 30, 50, 200, 0.5)
        with pytest.raises(ValueError):
            MarketParams(10, 50, -1, 200, 0.5)
        with pytest.raises(ValueError):
            MarketParams(10, 50, 30, -1, 0.5)
        with pytest.raises(ValueError):
            MarketParams(10, 50, 30, 200, 1.5)

    def test_cost_spec(self):
        with pytest.raises(ValueError):
            CostSpec(0, 1)
        with pytest.raises(ValueError):
            CostSpec(1, -2)

    def test_penalty_spec(self):
        with pytest.raises(ValueError):
            PenaltySpec(0, 1.5)
        with pytest.raises(ValueError):
            PenaltySpec(1, 1.0)

    def test_contract(self):
        with pytest.raises(ValueError):
            Contract(10, 5, 11, 0, 0.5)
        with pytest.raises(ValueError):
            Contract(10, 5, 0, 6, 0.5)
        with pytest.raises(ValueError):
            Contract(10, 5, 0, 0, 1.0)
        Contract(10, 5, 10, 5, 0.0)  # full theft at zero effort is legal

    def test_effort_domain(self):
        with pytest.raises(ValueError):
            cost(CostSpec(1, 1), 1.0)
        with pytest.raises(ValueError):
            marginal_cost(CostSpec(1, 1), -0.1)


# Fixed grid for derivative cross-checks: central differences with h = 1e-5
# keep the truncation error at least an order below the 1e-6 gate across the
# whole (a, q) range used here.
DIFF_POINTS = [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95]


@pytest.mark.parametrize("a", DIFF_POINTS)
@pytest.mark.parametrize("spec", [CostSpec(1, 1), CostSpec(0.1, 3), CostSpec(2, 0.5), CostSpec(1, 5)])
def test_marginal_cost_matches_finite_difference(spec, a):
    h = 1e-5
    numeric = (cost(spec, a + h) - cost(spec, a - h)) / (2 * h)
    analytic = marginal_cost(spec, a)
    assert analytic == pytest.approx(numeric, rel=1e-6)


@pytest.mark.parametrize("a", DIFF_POINTS)
@pytest.mark.parametrize("spec", [CostSpec(1, 1), CostSpec(0.1, 3), CostSpec(2, 0.5), CostSpec(1, 5)])
def test_curvature_matches_finite_difference(spec, a):
    h = 1e-5
    numeric = (marginal_cost(spec, a + h) - marginal_cost(spec, a - h)) / (2 * h)
    analytic = cost_curvature(spec, a)
    assert analytic == pytest.approx(numeric, rel=1e-6)


@given(spec=costs, a1=st.floats(0.0, 0.98), a2=st.floats(0.0, 0.98))
def test_cost_is_convex(spec, a1, a2):
    mid = 0.5 * (a1 + a2)
    lhs = cost(spec, mid)
    rhs = 0.5 * (cost(spec, a1) + cost(spec, a2))
    assert lhs <= rhs + 1e-9 * (1.0 + abs(rhs))


@given(spec=costs, delta=st.floats(0.1, 1e4))
def test_inverse_marginal_cost_round_trip(spec, delta):
    a = inverse_marginal_cost(spec, delta)
    if a == 0.0:
        assert delta <= spec.k
    elif a < EFFORT_CAP:
        assert marginal_cost(spec, a) == pytest.approx(delta, rel=1e-6)


@given(spec=penalties, gamma=st.floats(0.01, 1.0))
@settings(max_examples=200)
def test_ideal_theft_first_order_condition(spec, gamma):
    beta = ideal_theft(spec, gamma)
    if 0.0 < beta < math.inf:
        assert gamma * marginal_raw_penalty(spec, beta) == pytest.approx(1.0, abs=1e-9)


@given(spec=penalties, gamma=st.floats(0.01, 0.99))
def test_ideal_theft_decreasing_in_enforcement(spec, gamma):
    base = ideal_theft(spec, gamma)
    stiffer = ideal_theft(PenaltySpec(spec.sigma * 2.0, spec.p), gamma)
    watched = ideal_theft(spec, min(1.0, gamma * 2.0))
    if math.isfinite(base):
        assert stiffer <= base + 1e-12
        assert watched <= base + 1e-12


@given(
    spec=costs,
    w_high=st.floats(0.0, 50.0),
    w_low=st.floats(0.0, 50.0),
)
@settings(max_examples=200)
def test_best_response_beats_grid(spec, w_high, w_low):
    a_star = worker_best_response(spec, w_high, w_low)

    def utility(a):
        return a * w_high + (1.0 - a) * w_low - cost(spec, a)

    best = utility(a_star)
    for i in range(101):
        a = i / 101.0
        assert utility(a) <= best + 1e-7 * (1.0 + abs(best))
