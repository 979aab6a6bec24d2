"""Repeated interaction with a theft-forecasting worker.

Each period the employer plays a fixed strategy (promised wages plus a theft
plan) and the worker responds to the wages he expects to actually receive:
promised wages net of his current theft forecasts, floored at zero.  A worker
who rejects takes the outside option, the employer earns nothing, and no
theft is observed, so forecasts only update on employed periods.

For constant strategies every forecast variant converges to the true theft,
and the long-run per-period profit equals the reduced one-stage value with
forecasts set equal to the plan, which ``steady_state_profit`` evaluates
directly.
"""

import csv
from collections import deque
from dataclasses import dataclass

import numpy as np

from .characterization import _utility_at
from .model import (
    CostSpec,
    MarketParams,
    PenaltySpec,
    expected_penalty,
    worker_best_response,
)
from .solver import _solve_with_beta, positive_effort_condition

FORECAST_VARIANTS = (
    "last_observation",
    "running_mean",
    "moving_average",
    "exponential_smoothing",
)

# Participation comparisons allow this much slack so a strategy sitting
# exactly on the reservation boundary is accepted despite rounding.
IR_SLACK = 1e-9

CONVERGENCE_TOL = 1e-8


@dataclass(frozen=True)
class ForecastRule:
    """How the worker predicts next period's theft from past observations."""

    variant: str
    window: int = 5
    alpha: float = 0.5
    initial_forecast: float = 0.0

    def __post_init__(self):
        if self.variant not in FORECAST_VARIANTS:
            raise ValueError(f"unknown forecast variant {self.variant!r}")
        object.__setattr__(self, "window", int(self.window))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "initial_forecast", float(self.initial_forecast))
        if self.window < 1:
            raise ValueError("window must be a positive integer")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if self.initial_forecast < 0:
            raise ValueError("initial_forecast must be nonnegative")


class _Forecaster:
    """Mutable forecast state for one wage level."""

    def __init__(self, rule: ForecastRule):
        self.rule = rule
        self.value = rule.initial_forecast
        self._seen = 0
        self._sum = 0.0
        self._window: deque = deque(maxlen=rule.window)

    def observe(self, b: float) -> None:
        rule = self.rule
        self._seen += 1
        if rule.variant == "last_observation":
            self.value = b
        elif rule.variant == "running_mean":
            self._sum += b
            self.value = self._sum / self._seen
        elif rule.variant == "moving_average":
            self._window.append(b)
            self.value = sum(self._window) / len(self._window)
        else:
            self.value = rule.alpha * b + (1.0 - rule.alpha) * self.value


@dataclass(frozen=True)
class FixedStrategy:
    """A constant promised-wage pair and theft plan for the repeated game."""

    w_high: float
    w_low: float
    b_high: float
    b_low: float

    def __post_init__(self):
        for name in ("w_high", "w_low", "b_high", "b_low"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.w_high < 0 or self.w_low < 0:
            raise ValueError("wages must be nonnegative")
        if not 0.0 <= self.b_high <= self.w_high:
            raise ValueError("b_high must lie in [0, w_high]")
        if not 0.0 <= self.b_low <= self.w_low:
            raise ValueError("b_low must lie in [0, w_low]")

    def honest_twin(self) -> "FixedStrategy":
        """Promise the net wages outright and steal nothing."""
        return FixedStrategy(self.w_high - self.b_high, self.w_low - self.b_low, 0.0, 0.0)


@dataclass(frozen=True)
class PeriodRecord:
    t: int
    forecast_high: float
    forecast_low: float
    effort: float
    employed: bool
    profit: float
    worker_utility: float
    outcome: int | None = None
    realized_profit: float | None = None


@dataclass(frozen=True)
class SimTrace:
    """Period-by-period simulation results plus convergence summary."""

    periods: tuple[PeriodRecord, ...]
    converged: bool
    periods_to_converge: int | None
    limit_profit: float


def _period_profit(
    market: MarketParams,
    penalty: PenaltySpec,
    strategy: FixedStrategy,
    a: float,
) -> float:
    gamma = market.inspection_rate
    high = (
        market.price * market.y_high
        - strategy.w_high
        + strategy.b_high
        - expected_penalty(penalty, gamma, strategy.b_high)
    )
    low = (
        market.price * market.y_low
        - strategy.w_low
        + strategy.b_low
        - expected_penalty(penalty, gamma, strategy.b_low)
    )
    return a * high + (1.0 - a) * low


def steady_state_profit(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    strategy: FixedStrategy,
    tol: float = IR_SLACK,
) -> float:
    """Per-period profit once forecasts have converged to the true theft.

    Evaluates the reduced one-stage game with forecasts equal to the plan:
    the worker responds to the net wages, participates if they clear the
    reservation utility (within ``tol``), and the employer pockets wages net
    of payouts and expected penalties.  Rejection earns zero.
    """
    eff_high = max(0.0, strategy.w_high - strategy.b_high)
    eff_low = max(0.0, strategy.w_low - strategy.b_low)
    a = worker_best_response(spec, eff_high, eff_low)
    if _utility_at(spec, a, eff_high, eff_low) < market.reservation_utility - tol:
        return 0.0
    return _period_profit(market, penalty, strategy, a)


def simulate(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    strategy: FixedStrategy,
    rule: ForecastRule,
    n_periods: int,
    seed: int | None = None,
) -> SimTrace:
    """Run the repeated game for ``n_periods`` under one forecast rule.

    Profit and worker utility are recorded in expectation over the output
    draw; passing a ``seed`` additionally realizes the output path (high
    output with probability equal to that period's effort) and records the
    realized-side profit per period.
    """
    if n_periods < 1:
        raise ValueError("n_periods must be a positive integer")
    high = _Forecaster(rule)
    low = _Forecaster(rule)
    rng = np.random.default_rng(seed) if seed is not None else None
    gamma = market.inspection_rate

    records = []
    converged = False
    periods_to_converge = None
    for t in range(1, n_periods + 1):
        fh = high.value
        fl = low.value
        eff_high = max(0.0, strategy.w_high - fh)
        eff_low = max(0.0, strategy.w_low - fl)
        a = worker_best_response(spec, eff_high, eff_low)
        employed = (
            _utility_at(spec, a, eff_high, eff_low)
            >= market.reservation_utility - IR_SLACK
        )
        outcome = None
        realized = None
        if employed:
            profit = _period_profit(market, penalty, strategy, a)
            worker_u = _utility_at(
                spec,
                a,
                max(0.0, strategy.w_high - strategy.b_high),
                max(0.0, strategy.w_low - strategy.b_low),
            )
            if rng is not None:
                outcome = int(rng.random() < a)
                if outcome:
                    realized = (
                        market.price * market.y_high
                        - strategy.w_high
                        + strategy.b_high
                        - expected_penalty(penalty, gamma, strategy.b_high)
                    )
                else:
                    realized = (
                        market.price * market.y_low
                        - strategy.w_low
                        + strategy.b_low
                        - expected_penalty(penalty, gamma, strategy.b_low)
                    )
            if not converged and (
                abs(fh - strategy.b_high) < CONVERGENCE_TOL
                and abs(fl - strategy.b_low) < CONVERGENCE_TOL
            ):
                converged = True
                periods_to_converge = t
            high.observe(strategy.b_high)
            low.observe(strategy.b_low)
        else:
            # No employment: nothing earned, nothing observed.
            profit = 0.0
            worker_u = market.reservation_utility
        records.append(
            PeriodRecord(t, fh, fl, a, employed, profit, worker_u, outcome, realized)
        )

    limit = steady_state_profit(market, spec, penalty, strategy)
    return SimTrace(tuple(records), converged, periods_to_converge, limit)


def write_trace_csv(trace: SimTrace, path) -> None:
    """Trace export: one row per period, stable column order."""
    realized = any(r.outcome is not None for r in trace.periods)
    header = ["t", "bhat_H", "bhat_L", "a", "employed", "profit", "worker_utility"]
    if realized:
        header += ["outcome", "realized_profit"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in trace.periods:
            row = [
                r.t,
                repr(r.forecast_high),
                repr(r.forecast_low),
                repr(r.effort),
                "true" if r.employed else "false",
                repr(r.profit),
                repr(r.worker_utility),
            ]
            if realized:
                row += [
                    "" if r.outcome is None else r.outcome,
                    "" if r.realized_profit is None else repr(r.realized_profit),
                ]
            writer.writerow(row)


@dataclass(frozen=True)
class DominanceReport:
    """Comparison of a strategy against its honest twin."""

    original_profit: float
    honest_profit: float
    margin: float
    expected_margin: float
    effort: float
    accepted: bool
    strict_expected: bool

    @property
    def passed(self) -> bool:
        if self.margin < -1e-12:
            return False
        if abs(self.margin - self.expected_margin) > 1e-9:
            return False
        if self.strict_expected and not self.margin > 0.0:
            return False
        return True


def check_dominance(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    strategy: FixedStrategy,
) -> DominanceReport:
    """Honest twin comparison: promising the net wages and stealing nothing.

    The twin leaves the worker's expectations and behavior unchanged, so when
    the strategy is accepted its profit exceeds the original by exactly the
    expected penalties a * E(b_high) + (1 - a) * E(b_low); the advantage is
    strict whenever effort and some theft are positive.
    """
    honest = strategy.honest_twin()
    original = steady_state_profit(market, spec, penalty, strategy)
    honest_profit = steady_state_profit(market, spec, penalty, honest)

    eff_high = max(0.0, strategy.w_high - strategy.b_high)
    eff_low = max(0.0, strategy.w_low - strategy.b_low)
    a = worker_best_response(spec, eff_high, eff_low)
    accepted = (
        _utility_at(spec, a, eff_high, eff_low)
        >= market.reservation_utility - IR_SLACK
    )
    gamma = market.inspection_rate
    if accepted:
        expected_margin = a * expected_penalty(penalty, gamma, strategy.b_high) + (
            1.0 - a
        ) * expected_penalty(penalty, gamma, strategy.b_low)
    else:
        expected_margin = 0.0
    strict_expected = accepted and a > 0.0 and (strategy.b_high > 0.0 or strategy.b_low > 0.0)
    return DominanceReport(
        original_profit=original,
        honest_profit=honest_profit,
        margin=honest_profit - original,
        expected_margin=expected_margin,
        effort=a,
        accepted=accepted,
        strict_expected=strict_expected,
    )


@dataclass(frozen=True)
class OptimalFixedStrategy:
    strategy: FixedStrategy
    effort: float
    profit: float


def optimal_fixed_strategy(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
) -> OptimalFixedStrategy:
    """Best fixed strategy of the repeated game: honest wages, no theft.

    Solves the one-stage problem with theft disabled.  Requires the
    positive-effort condition c'(0) < P * (y_high - y_low); the resulting
    effort is interior.
    """
    if not positive_effort_condition(market, spec):
        raise ValueError(
            "positive-effort condition violated: c'(0) must be below P * (y_high - y_low)"
        )
    result = _solve_with_beta(market, spec, penalty, 0.0)
    strategy = FixedStrategy(result.contract.w_high, result.contract.w_low, 0.0, 0.0)
    return OptimalFixedStrategy(strategy, result.contract.effort, result.profit)


def sample_fixed_strategies(
    market: MarketParams,
    spec: CostSpec,
    count: int,
    seed: int,
) -> list[FixedStrategy]:
    """Deterministic random strategies for audits, spread over a wage box
    wide enough to bracket the optimal contract."""
    scale = 2.0 * (
        market.reservation_utility
        + spec.k
        + market.price * (market.y_high - market.y_low)
    )
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        w_high = scale * rng.random()
        w_low = scale * rng.random()
        out.append(
            FixedStrategy(
                w_high,
                w_low,
                w_high * rng.random(),
                w_low * rng.random(),
            )
        )
    return out
