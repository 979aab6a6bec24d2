"""Primitives of the day-labor contract game.

A risk-neutral employer posts a verbal contract (high/low wage plus a hidden
theft plan), a worker responds with an effort level ``a`` in [0, 1) that is
also the probability of the high output, and an enforcement authority catches
wage theft ``b`` with probability ``gamma``, imposing a convex penalty.

Functional forms used throughout:

* effort cost      ``C(a) = k * a / (1 - a)**q``
* theft penalty    ``eta(b) = sigma * b**p`` with ``p > 1``
* expected penalty ``E(b) = gamma * eta(b)``

All monetary quantities (wages, outputs times price, penalties, reservation
utility) are expressed in the same currency unit.
"""

import math
from dataclasses import dataclass

# C(a) diverges at a = 1; evaluations are capped just below.
EFFORT_CAP = 1.0 - 1e-9

# Root finding on effort is plain bisection: absolute tolerance on a.
BISECT_TOL = 1e-12
BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class MarketParams:
    """Market environment: price, output levels, outside option, enforcement.

    ``inspection_rate`` (gamma) is the probability a theft event is caught
    and penalized.
    """

    price: float
    y_high: float
    y_low: float
    reservation_utility: float
    inspection_rate: float

    def __post_init__(self):
        for name in ("price", "y_high", "y_low", "reservation_utility", "inspection_rate"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.price > 0:
            raise ValueError("price must be positive")
        if not (self.y_high > self.y_low >= 0):
            raise ValueError("outputs must satisfy y_high > y_low >= 0")
        if not self.reservation_utility >= 0:
            raise ValueError("reservation_utility (u) must be nonnegative")
        if not 0.0 <= self.inspection_rate <= 1.0:
            raise ValueError("inspection_rate (gamma) must lie in [0, 1]")


@dataclass(frozen=True)
class CostSpec:
    """Effort-cost family C(a) = k * a / (1 - a)**q."""

    k: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "q", float(self.q))
        if not self.k > 0:
            raise ValueError("cost coefficient k must be positive")
        if not self.q > 0:
            raise ValueError("cost growth factor q must be positive")


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family eta(b) = sigma * b**p; p > 1 keeps eta strictly convex."""

    sigma: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "p", float(self.p))
        if not self.sigma > 0:
            raise ValueError("penalty coefficient sigma must be positive")
        if not self.p > 1:
            raise ValueError("penalty growth factor p must exceed 1")


@dataclass(frozen=True)
class Contract:
    """A verbal contract plus the employer's theft plan and induced effort."""

    w_high: float
    w_low: float
    b_high: float
    b_low: float
    effort: float

    def __post_init__(self):
        for name in ("w_high", "w_low", "b_high", "b_low", "effort"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.w_high < 0 or self.w_low < 0:
            raise ValueError("wages must be nonnegative")
        if not 0.0 <= self.b_high <= self.w_high:
            raise ValueError("b_high must lie in [0, w_high]")
        if not 0.0 <= self.b_low <= self.w_low:
            raise ValueError("b_low must lie in [0, w_low]")
        if not 0.0 <= self.effort < 1.0:
            raise ValueError("effort must lie in [0, 1)")


def _check_effort(a: float) -> None:
    if not 0.0 <= a < 1.0:
        raise ValueError("effort must lie in [0, 1)")


def cost(spec: CostSpec, a: float) -> float:
    """C(a) = k * a / (1 - a)**q."""
    _check_effort(a)
    return spec.k * a / (1.0 - a) ** spec.q


def marginal_cost(spec: CostSpec, a: float) -> float:
    """c'(a) = k * (1 - a)**(-q - 1) * ((1 - a) + a * q); c'(0) = k."""
    _check_effort(a)
    one_m = 1.0 - a
    return spec.k * one_m ** (-spec.q - 1.0) * (one_m + a * spec.q)


def cost_curvature(spec: CostSpec, a: float) -> float:
    """c''(a) = k * q * (1 - a)**(-q - 2) * (2 + a * (q - 1)); positive on [0, 1)."""
    _check_effort(a)
    one_m = 1.0 - a
    return spec.k * spec.q * one_m ** (-spec.q - 2.0) * (2.0 + a * (spec.q - 1.0))


def inverse_marginal_cost(spec: CostSpec, delta: float) -> float:
    """Effort a in [0, 1) with c'(a) = delta, or 0 when delta <= c'(0).

    c' is continuous and strictly increasing from c'(0) = k to infinity, so
    the root is unique; it is located by bisection to within BISECT_TOL.
    Deltas beyond c'(EFFORT_CAP) clamp to EFFORT_CAP.
    """
    if delta <= spec.k:
        return 0.0
    lo = 0.0
    hi = 0.5
    while marginal_cost(spec, hi) < delta:
        lo = hi
        hi = 1.0 - 0.5 * (1.0 - hi)
        if hi >= EFFORT_CAP:
            if marginal_cost(spec, EFFORT_CAP) < delta:
                return EFFORT_CAP
            hi = EFFORT_CAP
            break
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        if marginal_cost(spec, mid) < delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def raw_penalty(spec: PenaltySpec, b: float) -> float:
    """eta(b) = sigma * b**p for theft b >= 0."""
    if b < 0:
        raise ValueError("theft must be nonnegative")
    return spec.sigma * b ** spec.p


def marginal_raw_penalty(spec: PenaltySpec, b: float) -> float:
    """eta'(b) = sigma * p * b**(p - 1); zero at b = 0 since p > 1."""
    if b < 0:
        raise ValueError("theft must be nonnegative")
    return spec.sigma * spec.p * b ** (spec.p - 1.0)


def expected_penalty(spec: PenaltySpec, gamma: float, b: float) -> float:
    """E(b) = gamma * eta(b): the penalty discounted by the inspection rate."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("inspection_rate (gamma) must lie in [0, 1]")
    return gamma * raw_penalty(spec, b)


def ideal_theft(spec: PenaltySpec, gamma: float) -> float:
    """Unconstrained profit-maximizing theft: the b solving gamma * eta'(b) = 1.

    For the power family this is (p * sigma * gamma)**(1 / (1 - p)).  With no
    inspection (gamma = 0) stealing is costless and the ideal theft is
    unbounded; math.inf is returned as the sentinel.  The value is strictly
    decreasing in sigma and in gamma and does not depend on the market or on
    the cost of effort.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("inspection_rate (gamma) must lie in [0, 1]")
    if gamma == 0.0:
        return math.inf
    base = spec.p * spec.sigma * gamma
    try:
        return base ** (1.0 / (1.0 - spec.p))
    except OverflowError:
        return math.inf


def worker_best_response(spec: CostSpec, w_high_eff: float, w_low_eff: float) -> float:
    """Worker's optimal effort against the wage pair he expects to receive.

    The worker maximizes a * w_high_eff + (1 - a) * w_low_eff - C(a).  The
    objective is strictly concave, so the response is 0 when the wage gap is
    at most c'(0) = k and otherwise the unique a with c'(a) = gap.
    """
    gap = w_high_eff - w_low_eff
    if gap <= spec.k:
        return 0.0
    return inverse_marginal_cost(spec, gap)
