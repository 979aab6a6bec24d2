"""Repeated game: forecasting, convergence, and honest-twin dominance."""

import csv
import math

import pytest

from wagetheft import (
    CostSpec,
    FixedStrategy,
    ForecastRule,
    MarketParams,
    PenaltySpec,
    check_dominance,
    optimal_fixed_strategy,
    sample_fixed_strategies,
    simulate,
    solve,
    steady_state_profit,
    write_trace_csv,
)
from wagetheft.repeated import _Forecaster

UNIT = CostSpec(1, 1)
MARKET = MarketParams(10, 50, 30, 200, 0.5)
PEN = PenaltySpec(1, 1.5)
# Generous promises with moderate theft: stays accepted even after the worker
# has fully caught on (net wages 238.5 / 38.5 still clear u = 200).
GENEROUS = FixedStrategy(240, 40, 1.5, 1.5)


class TestForecasters:
    def test_last_observation(self):
        f = _Forecaster(ForecastRule("last_observation"))
        assert f.value == 0.0
        f.observe(3.0)
        assert f.value == 3.0
        f.observe(1.0)
        assert f.value == 1.0

    def test_running_mean(self):
        f = _Forecaster(ForecastRule("running_mean"))
        for b in (1.0, 2.0, 3.0):
            f.observe(b)
        assert f.value == pytest.approx(2.0, abs=0)

    def test_moving_average(self):
        f = _Forecaster(ForecastRule("moving_average", window=2))
        for b in (1.0, 2.0, 3.0):
            f.observe(b)
        assert f.value == pytest.approx(2.5, abs=0)

    def test_exponential_smoothing(self):
        f = _Forecaster(ForecastRule("exponential_smoothing", alpha=0.5))
        for _ in range(3):
            f.observe(4.0)
        # 4 * (1 - 0.5**3)
        assert f.value == pytest.approx(3.5, abs=1e-15)

    def test_smoothing_error_halves_each_step(self):
        f = _Forecaster(ForecastRule("exponential_smoothing", alpha=0.5))
        errors = []
        for _ in range(10):
            f.observe(2.0)
            errors.append(abs(f.value - 2.0))
        for prev, curr in zip(errors, errors[1:]):
            assert curr == pytest.approx(prev / 2.0, rel=1e-12)

    def test_initial_forecast(self):
        f = _Forecaster(ForecastRule("last_observation", initial_forecast=0.7))
        assert f.value == 0.7

    def test_validation(self):
        with pytest.raises(ValueError):
            ForecastRule("martingale")
        with pytest.raises(ValueError):
            ForecastRule("moving_average", window=0)
        with pytest.raises(ValueError):
            ForecastRule("exponential_smoothing", alpha=0.0)
        with pytest.raises(ValueError):
            ForecastRule("exponential_smoothing", alpha=1.5)
        with pytest.raises(ValueError):
            ForecastRule("last_observation", initial_forecast=-1.0)


RULES = [
    ForecastRule("last_observation"),
    ForecastRule("running_mean"),
    ForecastRule("moving_average", window=5),
    ForecastRule("moving_average", window=20),
    ForecastRule("exponential_smoothing", alpha=0.5),
    ForecastRule("exponential_smoothing", alpha=0.1),
]


class TestSimulation:
    @pytest.mark.parametrize("rule", RULES, ids=lambda r: f"{r.variant}-w{r.window}-a{r.alpha}")
    def test_constant_theft_converges_within_200(self, rule):
        trace = simulate(MARKET, UNIT, PEN, GENEROUS, rule, 200)
        assert trace.converged
        assert trace.periods_to_converge <= 200
        last = trace.periods[-1]
        assert abs(last.forecast_high - GENEROUS.b_high) < 1e-8
        assert abs(last.forecast_low - GENEROUS.b_low) < 1e-8

    def test_tail_profit_reaches_the_limit(self):
        trace = simulate(MARKET, UNIT, PEN, GENEROUS, ForecastRule("running_mean"), 300)
        limit = steady_state_profit(MARKET, UNIT, PEN, GENEROUS)
        assert trace.limit_profit == limit
        tail = trace.periods[-50:]
        mean_tail = sum(r.profit for r in tail) / len(tail)
        assert mean_tail == pytest.approx(limit, rel=1e-6, abs=1e-6)

    def test_honest_optimum_is_stationary_from_the_start(self):
        best = optimal_fixed_strategy(MARKET, UNIT, PEN)
        trace = simulate(MARKET, UNIT, PEN, best.strategy, ForecastRule("last_observation"), 50)
        assert trace.converged
        assert trace.periods_to_converge == 1
        profits = {r.profit for r in trace.periods}
        assert profits == {trace.limit_profit}
        assert all(r.employed for r in trace.periods)
        assert trace.limit_profit == pytest.approx(best.profit, rel=1e-12)

    def test_one_shot_optimum_gets_rejected_once_learned(self):
        # The one-shot contract relies on the worker believing the promises;
        # against a forecaster it survives exactly one period.
        res = solve(MARKET, UNIT, PEN)
        c = res.contract
        strategy = FixedStrategy(c.w_high, c.w_low, c.b_high, c.b_low)
        trace = simulate(MARKET, UNIT, PEN, strategy, ForecastRule("last_observation"), 20)
        assert trace.periods[0].employed
        assert not any(r.employed for r in trace.periods[1:])
        assert trace.limit_profit == 0.0
        # frozen forecasts after the rejection
        assert trace.periods[-1].forecast_high == c.b_high
        assert trace.periods[-1].forecast_low == c.b_low
        assert all(r.profit == 0.0 for r in trace.periods[1:])
        assert all(r.worker_utility == MARKET.reservation_utility for r in trace.periods[1:])

    def test_never_accepted_when_promises_cannot_clear_u(self):
        stingy = FixedStrategy(100, 10, 0, 0)
        trace = simulate(MARKET, UNIT, PEN, stingy, ForecastRule("running_mean"), 10)
        assert not any(r.employed for r in trace.periods)
        assert not trace.converged
        assert trace.periods_to_converge is None
        assert all(r.forecast_high == 0.0 for r in trace.periods)

    def test_seeded_outcomes_deterministic(self):
        t1 = simulate(MARKET, UNIT, PEN, GENEROUS, ForecastRule("last_observation"), 40, seed=7)
        t2 = simulate(MARKET, UNIT, PEN, GENEROUS, ForecastRule("last_observation"), 40, seed=7)
        assert [r.outcome for r in t1.periods] == [r.outcome for r in t2.periods]
        assert [r.realized_profit for r in t1.periods] == [r.realized_profit for r in t2.periods]
        assert any(r.outcome is not None for r in t1.periods)

    def test_unseeded_has_no_realized_columns(self):
        trace = simulate(MARKET, UNIT, PEN, GENEROUS, ForecastRule("last_observation"), 5)
        assert all(r.outcome is None for r in trace.periods)
        assert all(r.realized_profit is None for r in trace.periods)

    def test_rejects_bad_period_count(self):
        with pytest.raises(ValueError):
            simulate(MARKET, UNIT, PEN, GENEROUS, ForecastRule("last_observation"), 0)


class TestTraceCsv:
    def test_round_trip_expected_columns(self, tmp_path):
        trace = simulate(MARKET, UNIT, PEN, GENEROUS, ForecastRule("running_mean"), 12)
        path = tmp_path / "trace.csv"
        write_trace_csv(trace, path)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 12
        assert list(rows[0]) == ["t", "bhat_H", "bhat_L", "a", "employed", "profit", "worker_utility"]
        assert rows[0]["employed"] == "true"
        assert float(rows[-1]["profit"]) == trace.periods[-1].profit

    def test_realized_columns_present_when_seeded(self, tmp_path):
        trace = simulate(MARKET, UNIT, PEN, GENEROUS, ForecastRule("running_mean"), 8, seed=3)
        path = tmp_path / "trace.csv"
        write_trace_csv(trace, path)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert "outcome" in rows[0] and "realized_profit" in rows[0]
        assert rows[0]["outcome"] in {"0", "1"}


class TestSteadyState:
    def test_acceptance_boundary(self):
        # Net wages exactly at u with zero effort: accepted within the slack.
        flat = FixedStrategy(200, 200, 0, 0)
        profit = steady_state_profit(MARKET, UNIT, PEN, flat)
        assert profit == pytest.approx(300.0 - 200.0, rel=1e-12)

    def test_rejection_is_zero(self):
        assert steady_state_profit(MARKET, UNIT, PEN, FixedStrategy(50, 10, 0, 0)) == 0.0

    def test_full_theft_never_accepted_with_positive_u(self):
        assert steady_state_profit(MARKET, UNIT, PEN, FixedStrategy(300, 250, 300, 250)) == 0.0


class TestDominance:
    def test_audit_over_samples(self):
        strategies = sample_fixed_strategies(MARKET, UNIT, 200, seed=11)
        saw_strict = False
        for s in strategies:
            report = check_dominance(MARKET, UNIT, PEN, s)
            assert report.passed, (s, report)
            assert report.margin >= -1e-12
            if report.accepted:
                assert abs(report.margin - report.expected_margin) <= 1e-9
            if report.strict_expected:
                assert report.margin > 0.0
                saw_strict = True
        assert saw_strict  # the sample must actually exercise the strict case

    def test_twin_of_honest_strategy_is_itself(self):
        s = FixedStrategy(240, 40, 0, 0)
        report = check_dominance(MARKET, UNIT, PEN, s)
        assert report.margin == 0.0
        assert not report.strict_expected

    def test_rejected_strategy_margin_zero(self):
        s = FixedStrategy(100, 0, 100, 0)  # net wages zero: rejected
        report = check_dominance(MARKET, UNIT, PEN, s)
        assert report.original_profit == 0.0
        assert report.margin == report.honest_profit
        assert not report.accepted


class TestOptimalFixedStrategy:
    def test_shape(self):
        best = optimal_fixed_strategy(MARKET, UNIT, PEN)
        assert best.strategy.b_high == 0.0
        assert best.strategy.b_low == 0.0
        assert 0.0 < best.effort < 1.0

    def test_beats_samples(self):
        best = optimal_fixed_strategy(MARKET, UNIT, PEN)
        for s in sample_fixed_strategies(MARKET, UNIT, 200, seed=5):
            assert steady_state_profit(MARKET, UNIT, PEN, s) <= best.profit + 1e-9

    def test_beats_own_theft_variants(self):
        best = optimal_fixed_strategy(MARKET, UNIT, PEN)
        w = best.strategy
        for b in (0.5, 2.0, 10.0):
            variant = FixedStrategy(w.w_high + b, w.w_low + b, b, b)
            assert steady_state_profit(MARKET, UNIT, PEN, variant) <= best.profit + 1e-9

    def test_requires_positive_effort_condition(self):
        m = MarketParams(1, 1.5, 0.5, 1, 1)
        with pytest.raises(ValueError, match="positive-effort"):
            optimal_fixed_strategy(m, CostSpec(2, 1), PEN)
