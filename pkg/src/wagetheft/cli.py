"""Command-line interface.

Subcommands: solve (one-shot optimum), oracle-check (brute-force agreement),
simulate (repeated game trace), sweep (parameter grid to CSV), and
dominance-audit (honest-twin and optimal-fixed-strategy checks).

Exit codes: 0 on success, 1 on flag/config validation problems, 2 when an
internal verification check fails.
"""

import argparse
import json
import sys

from .experiments import SweepSpec, qualitative_checks, run_sweep, write_sweep_csv
from .model import CostSpec, MarketParams, PenaltySpec
from .oracle import GridSpec, brute_force_solve, verify_theft_rule
from .repeated import (
    FixedStrategy,
    ForecastRule,
    check_dominance,
    optimal_fixed_strategy,
    sample_fixed_strategies,
    simulate,
    steady_state_profit,
    write_trace_csv,
)
from .reporting import CheckLine, CheckReport
from .solver import solve

_INSTANCE_KEYS = ("P", "yL", "yH", "sigma", "p", "gamma", "k", "q", "u")
_FLAG_TO_KEY = {
    "price": "P",
    "yl": "yL",
    "yh": "yH",
    "sigma": "sigma",
    "p": "p",
    "gamma": "gamma",
    "k": "k",
    "q": "q",
    "u": "u",
}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on malformed flags."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_instance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with parameter keys P, yL, yH, sigma, p, gamma, k, q, u")
    parser.add_argument("--price", type=float, help="output price P")
    parser.add_argument("--yh", type=float, help="high output yH")
    parser.add_argument("--yl", type=float, help="low output yL")
    parser.add_argument("--u", type=float, help="worker reservation utility")
    parser.add_argument("--gamma", type=float, help="inspection rate in [0, 1]")
    parser.add_argument("--sigma", type=float, help="penalty coefficient")
    parser.add_argument("--p", type=float, help="penalty growth factor (> 1)")
    parser.add_argument("--k", type=float, help="effort cost coefficient")
    parser.add_argument("--q", type=float, help="effort cost growth factor")


def _load_instance(args) -> tuple[MarketParams, CostSpec, PenaltySpec]:
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ValueError("config must be a JSON object")
        for key in cfg:
            if key not in _INSTANCE_KEYS:
                raise ValueError(f"unknown config key {key!r}")
    values = {}
    for flag, key in _FLAG_TO_KEY.items():
        flag_value = getattr(args, flag)
        values[key] = flag_value if flag_value is not None else cfg.get(key)
    missing = [key for key in _INSTANCE_KEYS if values[key] is None]
    if missing:
        raise ValueError(f"missing parameter(s): {', '.join(missing)}")
    market = MarketParams(values["P"], values["yH"], values["yL"], values["u"], values["gamma"])
    return market, CostSpec(values["k"], values["q"]), PenaltySpec(values["sigma"], values["p"])


def _cmd_solve(args) -> int:
    market, cost_spec, penalty = _load_instance(args)
    result = solve(market, cost_spec, penalty)
    c = result.contract
    print(f"beta = {_fmt(result.beta)}")
    print(f"a_star = {_fmt(c.effort)}")
    print(f"wH = {_fmt(c.w_high)}")
    print(f"wL = {_fmt(c.w_low)}")
    print(f"bH = {_fmt(c.b_high)}")
    print(f"bL = {_fmt(c.b_low)}")
    print(f"effective_wH = {_fmt(c.w_high - c.b_high)}")
    print(f"effective_wL = {_fmt(c.w_low - c.b_low)}")
    print(f"profit = {_fmt(result.profit)}")
    print(f"worker_utility = {_fmt(result.worker_utility)}")
    b = result.breaks
    def opt(x):
        return "none" if x is None else _fmt(x)
    print(
        "breaks: a_w_low_zero=%s a_w_low_beta=%s a_w_high_beta=%s a_max=%s"
        % (opt(b.a_w_low_zero), opt(b.a_w_low_beta), opt(b.a_w_high_beta), _fmt(b.a_max))
    )
    if args.output:
        payload = {
            "params": {
                "P": market.price,
                "yL": market.y_low,
                "yH": market.y_high,
                "sigma": penalty.sigma,
                "p": penalty.p,
                "gamma": market.inspection_rate,
                "k": cost_spec.k,
                "q": cost_spec.q,
                "u": market.reservation_utility,
            },
            "beta": result.beta,
            "a_star": c.effort,
            "wH": c.w_high,
            "wL": c.w_low,
            "bH": c.b_high,
            "bL": c.b_low,
            "effective_wH": c.w_high - c.b_high,
            "effective_wL": c.w_low - c.b_low,
            "profit": result.profit,
            "worker_utility": result.worker_utility,
            "breaks": {
                "a_w_low_zero": b.a_w_low_zero,
                "a_w_low_beta": b.a_w_low_beta,
                "a_w_high_beta": b.a_w_high_beta,
                "a_max": b.a_max,
            },
        }
        with open(args.output, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_oracle_check(args) -> int:
    market, cost_spec, penalty = _load_instance(args)
    result = solve(market, cost_spec, penalty)
    effort = args.effort if args.effort is not None else result.contract.effort
    report = verify_theft_rule(market, cost_spec, penalty, effort)
    lines = list(report.lines)

    w_max = args.w_max if args.w_max is not None else 1.25 * result.contract.w_high + 1.0
    grid = GridSpec(w_max=w_max, n_w=args.n_w, n_b=args.n_b, n_a=args.n_a)
    oracle = brute_force_solve(market, cost_spec, penalty, grid, scan_ic=args.scan_ic)
    w_max_final = w_max
    for note in oracle.notes:
        if note.startswith("w-max-final="):
            w_max_final = float(note.split("=", 1)[1])
    step = w_max_final / (grid.n_w - 1)
    gap = result.profit - oracle.profit
    lines.append(CheckLine("profit-agreement", abs(gap) <= 2.0 * step, abs(gap)))
    lines.append(
        CheckLine(
            "oracle-not-better",
            oracle.profit <= result.profit + 1e-6 * (1.0 + abs(result.profit)),
            max(0.0, -gap),
        )
    )
    full = CheckReport(tuple(lines))
    print(full.render())
    return 0 if full.passed else 2


def _cmd_simulate(args) -> int:
    market, cost_spec, penalty = _load_instance(args)
    strategy = FixedStrategy(args.wh, args.wl, args.bh, args.bl)
    rule = ForecastRule(
        variant=args.rule,
        window=args.window,
        alpha=args.alpha,
        initial_forecast=args.initial_forecast,
    )
    trace = simulate(market, cost_spec, penalty, strategy, rule, args.periods, seed=args.seed)
    tail = trace.periods[-min(50, len(trace.periods)):]
    mean_tail = sum(r.profit for r in tail) / len(tail)
    print(f"converged = {'true' if trace.converged else 'false'}")
    print(f"periods_to_converge = {trace.periods_to_converge if trace.periods_to_converge is not None else 'none'}")
    print(f"limit_profit = {_fmt(trace.limit_profit)}")
    print(f"mean_tail_profit = {_fmt(mean_tail)}")
    if args.output:
        write_trace_csv(trace, args.output)
    return 0


def _cmd_sweep(args) -> int:
    with open(args.config) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("sweep config must be a JSON object")
    spec = SweepSpec.from_config(data)
    output = args.output if args.output is not None else data.get("output")
    if output is None:
        raise ValueError("missing parameter(s): output")
    rows = run_sweep(spec, jobs=args.jobs)
    write_sweep_csv(rows, output)
    errors = sum(1 for r in rows if r.error is not None)
    print(f"rows = {len(rows)}")
    print(f"error_rows = {errors}")
    print(f"output = {output}")
    if args.check:
        report = qualitative_checks(rows)
        print(report.render())
        if not report.passed:
            return 2
    return 0


def _cmd_dominance_audit(args) -> int:
    market, cost_spec, penalty = _load_instance(args)
    best = optimal_fixed_strategy(market, cost_spec, penalty)
    print(f"optimal_wH = {_fmt(best.strategy.w_high)}")
    print(f"optimal_wL = {_fmt(best.strategy.w_low)}")
    print(f"optimal_effort = {_fmt(best.effort)}")
    print(f"optimal_profit = {_fmt(best.profit)}")

    strategies = sample_fixed_strategies(market, cost_spec, args.samples, args.seed)
    worst_weak = 0.0
    worst_formula = 0.0
    strict_failures = 0
    worst_excess = 0.0
    for strategy in strategies:
        report = check_dominance(market, cost_spec, penalty, strategy)
        worst_weak = max(worst_weak, -report.margin)
        if report.accepted:
            worst_formula = max(worst_formula, abs(report.margin - report.expected_margin))
        if report.strict_expected and not report.margin > 0.0:
            strict_failures += 1
        excess = steady_state_profit(market, cost_spec, penalty, strategy) - best.profit
        worst_excess = max(worst_excess, excess)

    lines = (
        CheckLine("honest-twin-weak-dominance", worst_weak <= 1e-12, worst_weak),
        CheckLine("honest-twin-margin-formula", worst_formula <= 1e-9, worst_formula),
        CheckLine("strict-when-theft-and-effort", strict_failures == 0, float(strict_failures)),
        CheckLine("optimal-fixed-strategy-dominates", worst_excess <= 1e-9, max(0.0, worst_excess)),
    )
    report = CheckReport(lines)
    print(report.render())
    return 0 if report.passed else 2


def _build_parser() -> _Parser:
    parser = _Parser(prog="wagetheft", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve the one-shot contract problem")
    _add_instance_flags(p_solve)
    p_solve.add_argument("--output", help="write the result as JSON")
    p_solve.set_defaults(func=_cmd_solve)

    p_oracle = sub.add_parser("oracle-check", help="compare against the brute-force grid")
    _add_instance_flags(p_oracle)
    p_oracle.add_argument("--w-max", type=float, help="wage grid upper bound (default: sized from the solve)")
    p_oracle.add_argument("--n-w", type=int, default=400, help="wage grid points per axis")
    p_oracle.add_argument("--n-b", type=int, default=21, help="theft candidates per wage")
    p_oracle.add_argument("--n-a", type=int, default=1001, help="effort grid for --scan-ic")
    p_oracle.add_argument("--scan-ic", action="store_true", help="resolve worker response by effort scan")
    p_oracle.add_argument("--effort", type=float, help="effort at which to verify the theft rule")
    p_oracle.set_defaults(func=_cmd_oracle_check)

    p_sim = sub.add_parser("simulate", help="simulate the repeated game")
    _add_instance_flags(p_sim)
    p_sim.add_argument("--wh", type=float, required=True, help="promised high wage")
    p_sim.add_argument("--wl", type=float, required=True, help="promised low wage")
    p_sim.add_argument("--bh", type=float, required=True, help="theft at high wage")
    p_sim.add_argument("--bl", type=float, required=True, help="theft at low wage")
    p_sim.add_argument(
        "--rule",
        default="last_observation",
        choices=["last_observation", "running_mean", "moving_average", "exponential_smoothing"],
    )
    p_sim.add_argument("--window", type=int, default=5)
    p_sim.add_argument("--alpha", type=float, default=0.5)
    p_sim.add_argument("--initial-forecast", type=float, default=0.0)
    p_sim.add_argument("--periods", type=int, default=200)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--output", help="write the period trace as CSV")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep to CSV")
    p_sweep.add_argument("--config", required=True, help="sweep spec JSON (params, axis, output)")
    p_sweep.add_argument("--output", help="override the config's output path")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--check", action="store_true", help="run qualitative trend checks")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_dom = sub.add_parser("dominance-audit", help="audit honest-twin dominance")
    _add_instance_flags(p_dom)
    p_dom.add_argument("--samples", type=int, default=500)
    p_dom.add_argument("--seed", type=int, default=0)
    p_dom.set_defaults(func=_cmd_dominance_audit)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
