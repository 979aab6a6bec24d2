"""Closed-form structure of the optimal contract at a fixed effort level.

For a target effort ``a`` the employer's wage problem collapses to closed
forms: the low wage is pinned by the participation constraint (floored at
zero), the high wage sits exactly one marginal cost above it so the incentive
constraint binds, and theft at each wage clamps the ideal theft to the wage
actually promised.  Substituting these into expected profit leaves a single
one-dimensional objective over effort, handled by :mod:`wagetheft.solver`.
"""

from dataclasses import dataclass
from typing import Callable

from .model import (
    CostSpec,
    MarketParams,
    PenaltySpec,
    cost,
    ideal_theft,
    marginal_cost,
    marginal_raw_penalty,
)


@dataclass(frozen=True)
class ReducedPoint:
    """Optimal contract ingredients and payoffs at one effort level."""

    effort: float
    w_low: float
    w_high: float
    b_low: float
    b_high: float
    profit: float
    worker_utility: float


def effort_rent(spec: CostSpec, a: float) -> float:
    """a * c'(a) - C(a): the worker's surplus over the low wage at effort a.

    Vanishes at a = 0, is strictly increasing (derivative a * c''(a)), and
    diverges as a -> 1, which is what drives the low wage to its zero floor.
    """
    return a * marginal_cost(spec, a) - cost(spec, a)


def optimal_low_wage(market: MarketParams, spec: CostSpec, a: float) -> float:
    """w_low*(a) = max{0, u - a * c'(a) + C(a)}."""
    w = market.reservation_utility - effort_rent(spec, a)
    return w if w > 0.0 else 0.0


def optimal_high_wage(market: MarketParams, spec: CostSpec, a: float) -> float:
    """w_high*(a) = w_low*(a) + c'(a); the incentive constraint binds."""
    return optimal_low_wage(market, spec, a) + marginal_cost(spec, a)


def optimal_theft(penalty: PenaltySpec, gamma: float, wage: float) -> float:
    """Theft at a promised wage: the ideal theft clamped to the wage itself."""
    if wage < 0:
        raise ValueError("wages must be nonnegative")
    return min(ideal_theft(penalty, gamma), wage)


def theft_eliminated(penalty: PenaltySpec, gamma: float, *, eta_prime_at_zero: float | None = None) -> bool:
    """Whether enforcement deters all theft: gamma * eta'(0) >= 1.

    The first stolen unit is profitable unless its expected marginal penalty
    already reaches one.  The strictly convex power family has eta'(0) = 0,
    so this never holds for any finite sigma; pass ``eta_prime_at_zero`` to
    evaluate the same rule for a penalty with a positive marginal at zero
    (e.g. a linear-capped one).
    """
    if eta_prime_at_zero is None:
        eta_prime_at_zero = marginal_raw_penalty(penalty, 0.0)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("inspection_rate (gamma) must lie in [0, 1]")
    return gamma * eta_prime_at_zero >= 1.0


def worker_utility(market: MarketParams, spec: CostSpec, point: ReducedPoint) -> float:
    """Expected worker utility a * w_high + (1 - a) * w_low - C(a).

    Equals the reservation utility exactly while the low wage is interior and
    weakly exceeds it once the zero floor binds.
    """
    a = point.effort
    return a * point.w_high + (1.0 - a) * point.w_low - cost(spec, a)


def make_profit_fn(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    beta: float,
) -> Callable[[float], float]:
    """Reduced expected profit g(a) as a tight scalar closure.

    ``beta`` is the ideal theft (may be math.inf); passing it explicitly lets
    callers evaluate theft-free variants with beta = 0.  This is the hot path
    for the solver and the sweep harness, so the wage and penalty formulas
    are inlined rather than routed through the per-call validators.
    """
    ph = market.price * market.y_high
    pl = market.price * market.y_low
    u = market.reservation_utility
    k = spec.k
    q = spec.q
    gs = market.inspection_rate * penalty.sigma
    p = penalty.p

    def g(a: float) -> float:
        one_m = 1.0 - a
        c1 = k * one_m ** (-q - 1.0) * (one_m + a * q)
        wl = u - (a * c1 - k * a / one_m ** q)
        if wl < 0.0:
            wl = 0.0
        wh = wl + c1
        bl = beta if beta < wl else wl
        bh = beta if beta < wh else wh
        return a * (ph - wh + bh - gs * bh ** p) + (1.0 - a) * (pl - wl + bl - gs * bl ** p)

    return g


def _point(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    beta: float,
    a: float,
) -> ReducedPoint:
    """Full ReducedPoint at effort a for a given ideal theft."""
    wl = optimal_low_wage(market, spec, a)
    wh = wl + marginal_cost(spec, a)
    bl = min(beta, wl)
    bh = min(beta, wh)
    gs = market.inspection_rate * penalty.sigma
    p = penalty.p
    profit = a * (market.price * market.y_high - wh + bh - gs * bh ** p) + (1.0 - a) * (
        market.price * market.y_low - wl + bl - gs * bl ** p
    )
    utility = a * wh + (1.0 - a) * wl - cost(spec, a)
    return ReducedPoint(a, wl, wh, bl, bh, profit, utility)


def reduced_objective(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    a: float,
) -> ReducedPoint:
    """Evaluate the reduced problem at effort a under the optimal wage/theft rules."""
    beta = ideal_theft(penalty, market.inspection_rate)
    return _point(market, spec, penalty, beta, a)


def _utility_at(spec: CostSpec, a: float, w_high: float, w_low: float) -> float:
    """Worker utility at arbitrary promised-or-effective wages."""
    return a * w_high + (1.0 - a) * w_low - cost(spec, a)


__all__ = [
    "ReducedPoint",
    "effort_rent",
    "optimal_low_wage",
    "optimal_high_wage",
    "optimal_theft",
    "theft_eliminated",
    "worker_utility",
    "make_profit_fn",
    "reduced_objective",
]
