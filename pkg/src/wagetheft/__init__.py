"""Contract design under wage theft in spot labor markets.

A risk-neutral employer posts output-contingent wages, may later withhold
part of them, and faces a convex expected penalty for doing so. The worker
chooses effort knowing the promised wages. This package provides the exact
one-shot solution, a brute-force grid oracle, a repeated-game simulator
with worker forecasting, and parameter sweep utilities.
"""

from .characterization import (
    ReducedPoint,
    effort_rent,
    make_profit_fn,
    optimal_high_wage,
    optimal_low_wage,
    optimal_theft,
    reduced_objective,
    theft_eliminated,
)
from .model import (
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
from .oracle import GridSpec, brute_force_solve, verify_theft_rule
from .repeated import (
    DominanceReport,
    FixedStrategy,
    ForecastRule,
    OptimalFixedStrategy,
    PeriodRecord,
    SimTrace,
    check_dominance,
    optimal_fixed_strategy,
    sample_fixed_strategies,
    simulate,
    steady_state_profit,
    write_trace_csv,
)
from .reporting import CheckLine, CheckReport
from .experiments import (
    SweepRow,
    SweepSpec,
    qualitative_checks,
    read_sweep_csv,
    run_sweep,
    solve_cell,
    write_sweep_csv,
)
from .solver import (
    BreakPoints,
    SolveResult,
    find_break_points,
    positive_effort_condition,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "BreakPoints",
    "CheckLine",
    "CheckReport",
    "Contract",
    "CostSpec",
    "DominanceReport",
    "FixedStrategy",
    "ForecastRule",
    "GridSpec",
    "MarketParams",
    "OptimalFixedStrategy",
    "PenaltySpec",
    "PeriodRecord",
    "ReducedPoint",
    "SimTrace",
    "SolveResult",
    "SweepRow",
    "SweepSpec",
    "brute_force_solve",
    "check_dominance",
    "cost",
    "cost_curvature",
    "effort_rent",
    "expected_penalty",
    "find_break_points",
    "ideal_theft",
    "inverse_marginal_cost",
    "make_profit_fn",
    "marginal_cost",
    "marginal_raw_penalty",
    "optimal_fixed_strategy",
    "optimal_high_wage",
    "optimal_low_wage",
    "optimal_theft",
    "positive_effort_condition",
    "qualitative_checks",
    "raw_penalty",
    "read_sweep_csv",
    "reduced_objective",
    "run_sweep",
    "sample_fixed_strategies",
    "simulate",
    "solve",
    "solve_cell",
    "steady_state_profit",
    "theft_eliminated",
    "verify_theft_rule",
    "worker_best_response",
    "write_sweep_csv",
    "write_trace_csv",
]
