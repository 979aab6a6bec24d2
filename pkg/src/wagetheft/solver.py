"""One-dimensional solve of the reduced contract problem.

The reduced profit g(a) is smooth except at a handful of regime switches:
the low wage hitting its zero floor and each theft clamp switching between
the ideal theft and the promised wage.  The solver locates those break
points by bisection (every defining function is monotone in effort), splits
[0, a_max] into closed segments, and refines each segment with a coarse scan
plus golden-section search before comparing segment optima.

The upper search bound a_max comes from the tail of g: once every regime has
switched, g'(a) = P*(y_high - y_low) + beta - E(beta) - c'(a) - a * c''(a),
which is strictly decreasing, so effort levels past its sign change cannot
be optimal.
"""

import math
from dataclasses import dataclass
from typing import Callable

from .characterization import _point, effort_rent, make_profit_fn, optimal_high_wage
from .model import (
    EFFORT_CAP,
    BISECT_MAX_ITER,
    BISECT_TOL,
    Contract,
    CostSpec,
    MarketParams,
    PenaltySpec,
    cost_curvature,
    expected_penalty,
    ideal_theft,
    marginal_cost,
)

# Search never proposes efforts above this; the tail check is capped here too.
A_MAX_CAP = 1.0 - 1e-6
# Segments are widened by this much so kinks are interior to a search window.
SEGMENT_OVERLAP = 1e-9
# The last segment starts at least this far past the last break point.
BREAK_MARGIN = 1e-4
# The tail derivative counts as "decreasing" once it falls below this.
TAIL_THRESHOLD = -1e-6
GOLDEN_TOL = 1e-10
SCAN_POINTS = 33
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BreakPoints:
    """Regime-switch efforts (None when the regime never switches) and a_max."""

    a_w_low_zero: float | None
    a_w_low_beta: float | None
    a_w_high_beta: float | None
    a_max: float


@dataclass(frozen=True)
class SolveResult:
    """Optimal contract, its payoffs, and solver diagnostics."""

    contract: Contract
    profit: float
    worker_utility: float
    beta: float
    breaks: BreakPoints | None
    segment_optima: tuple[tuple[int, float, float], ...]
    notes: tuple[str, ...] = ()


def positive_effort_condition(market: MarketParams, spec: CostSpec) -> bool:
    """c'(0) < P * (y_high - y_low): inducing effort is worth at least trying."""
    return marginal_cost(spec, 0.0) < market.price * (market.y_high - market.y_low)


def _increasing_root(f: Callable[[float], float], lo: float, hi: float) -> float:
    """Root of an increasing f with f(lo) <= 0 <= f(hi), by bisection."""
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _expand_and_bisect(f: Callable[[float], float]) -> float | None:
    """Root of increasing f on (0, EFFORT_CAP) with f(0) < 0, or None if f
    stays negative all the way to the cap."""
    lo = 0.0
    hi = 0.5
    while f(hi) < 0.0:
        lo = hi
        hi = 1.0 - 0.5 * (1.0 - hi)
        if hi >= EFFORT_CAP:
            if f(EFFORT_CAP) < 0.0:
                return None
            hi = EFFORT_CAP
            break
    return _increasing_root(f, lo, hi)


def _break_points(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    beta: float,
) -> BreakPoints:
    u = market.reservation_utility

    a_w_low_zero = None
    if u > 0.0:
        a_w_low_zero = _expand_and_bisect(lambda a: effort_rent(spec, a) - u)

    a_w_low_beta = None
    if math.isfinite(beta) and 0.0 < beta < u:
        a_w_low_beta = _expand_and_bisect(lambda a: effort_rent(spec, a) - (u - beta))

    a_w_high_beta = None
    if math.isfinite(beta) and beta > u + spec.k:
        a_w_high_beta = _expand_and_bisect(lambda a: optimal_high_wage(market, spec, a) - beta)

    present = [x for x in (a_w_low_zero, a_w_low_beta, a_w_high_beta) if x is not None]
    last_break = max(present, default=0.0)

    if not math.isfinite(beta):
        # No finite theft bonus: the tail never turns down, search to the cap.
        a_max = A_MAX_CAP
    else:
        bonus = beta - expected_penalty(penalty, market.inspection_rate, beta)
        gap = market.price * (market.y_high - market.y_low)

        def tail(a: float) -> float:
            return gap + bonus - marginal_cost(spec, a) - a * cost_curvature(spec, a)

        start = min(last_break + BREAK_MARGIN, A_MAX_CAP)
        if tail(A_MAX_CAP) > TAIL_THRESHOLD:
            a_max = A_MAX_CAP
        elif tail(start) <= TAIL_THRESHOLD:
            a_max = start
        else:
            # tail is strictly decreasing, so this brackets the sign change.
            root = _increasing_root(lambda a: TAIL_THRESHOLD - tail(a), start, A_MAX_CAP)
            a_max = min(max(last_break + BREAK_MARGIN, root), A_MAX_CAP)

    return BreakPoints(a_w_low_zero, a_w_low_beta, a_w_high_beta, a_max)


def find_break_points(market: MarketParams, spec: CostSpec, penalty: PenaltySpec) -> BreakPoints:
    """Regime switches of the reduced problem for the given environment."""
    beta = ideal_theft(penalty, market.inspection_rate)
    return _break_points(market, spec, penalty, beta)


def _golden_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = GOLDEN_TOL,
) -> tuple[float, float]:
    """Golden-section maximum of f on [lo, hi]; returns best evaluated point."""
    if hi - lo <= tol:
        mid = 0.5 * (lo + hi)
        return mid, f(mid)
    h = hi - lo
    x1 = hi - _INVPHI * h
    x2 = lo + _INVPHI * h
    f1 = f(x1)
    f2 = f(x2)
    if f1 >= f2:
        best_x, best_f = x1, f1
    else:
        best_x, best_f = x2, f2
    for _ in range(BISECT_MAX_ITER):
        if h <= tol:
            break
        if f1 < f2:
            lo = x1
            x1, f1 = x2, f2
            h = hi - lo
            x2 = lo + _INVPHI * h
            f2 = f(x2)
            if f2 > best_f or (f2 == best_f and x2 < best_x):
                best_x, best_f = x2, f2
        else:
            hi = x2
            x2, f2 = x1, f1
            h = hi - lo
            x1 = hi - _INVPHI * h
            f1 = f(x1)
            if f1 > best_f or (f1 == best_f and x1 < best_x):
                best_x, best_f = x1, f1
    return best_x, best_f


def _segment_max(g: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """Best effort within one smooth segment: coarse scan, then refinement."""
    xlo = max(0.0, lo - SEGMENT_OVERLAP)
    xhi = min(EFFORT_CAP, hi + SEGMENT_OVERLAP)
    if xhi <= xlo:
        return lo, g(lo)
    n = SCAN_POINTS
    step = (xhi - xlo) / (n - 1)
    best_i = 0
    best_f = g(xlo)
    xs = [xlo]
    fs = [best_f]
    for i in range(1, n):
        x = xlo + i * step
        fx = g(x)
        xs.append(x)
        fs.append(fx)
        if fx > best_f:
            best_f = fx
            best_i = i
    blo = xs[best_i - 1] if best_i > 0 else xlo
    bhi = xs[best_i + 1] if best_i < n - 1 else xhi
    gx, gf = _golden_max(g, blo, bhi)
    candidates = [(xs[best_i], fs[best_i]), (gx, gf), (lo, g(lo)), (min(hi, EFFORT_CAP), g(min(hi, EFFORT_CAP)))]
    best_x, best_f = candidates[0]
    for x, fx in candidates[1:]:
        if fx > best_f or (fx == best_f and x < best_x):
            best_x, best_f = x, fx
    return best_x, best_f


def _solve_with_beta(
    market: MarketParams,
    spec: CostSpec,
    penalty: PenaltySpec,
    beta: float,
) -> SolveResult:
    breaks = _break_points(market, spec, penalty, beta)
    g = make_profit_fn(market, spec, penalty, beta)

    interior = sorted(
        x
        for x in (breaks.a_w_low_zero, breaks.a_w_low_beta, breaks.a_w_high_beta)
        if x is not None and 1e-12 < x < breaks.a_max - 1e-12
    )
    knots = [0.0]
    for x in interior:
        if x - knots[-1] > 2.0 * SEGMENT_OVERLAP:
            knots.append(x)
    knots.append(breaks.a_max)

    segment_optima = []
    best_a = None
    best_g = -math.inf
    for idx in range(len(knots) - 1):
        seg_a, seg_g = _segment_max(g, knots[idx], knots[idx + 1])
        segment_optima.append((idx, seg_a, seg_g))
        if seg_g > best_g:
            best_a, best_g = seg_a, seg_g

    # segment widening may step a hair past the outer bounds; pull it back
    best_a = min(max(best_a, 0.0), breaks.a_max)
    point = _point(market, spec, penalty, beta, best_a)
    contract = Contract(point.w_high, point.w_low, point.b_high, point.b_low, best_a)
    return SolveResult(
        contract=contract,
        profit=point.profit,
        worker_utility=point.worker_utility,
        beta=beta,
        breaks=breaks,
        segment_optima=tuple(segment_optima),
    )


def solve(market: MarketParams, spec: CostSpec, penalty: PenaltySpec) -> SolveResult:
    """Globally optimal contract of the one-shot game.

    Equal-profit ties between segments resolve to the smallest effort, and
    identical inputs always produce an identical result.
    """
    beta = ideal_theft(penalty, market.inspection_rate)
    return _solve_with_beta(market, spec, penalty, beta)
