"""Parameter sweeps over the default experimental grid.

A sweep fixes a market context, designates one or more axis parameters, and
solves every cell of the cartesian product of the axis value lists.  Rows
come out in lexicographic parameter order and serialize to a flat CSV whose
column set is the stable interchange format for downstream tooling (the
figure renderer consumes exactly this schema).
"""

import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

from .model import CostSpec, MarketParams, PenaltySpec
from .reporting import CheckLine, CheckReport
from .solver import solve

# Canonical parameter order; also the leading CSV columns.
PARAM_ORDER = ("P", "yL", "yH", "sigma", "p", "gamma", "k", "q", "u")

# The default experimental grid: every sweep context draws from these.
GRID_DEFAULTS = {
    "P": (10.0, 15.0, 20.0, 30.0, 40.0),
    "yL": (30.0, 40.0),
    "yH": (50.0,),
    "sigma": (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 5.0),
    "p": (1.1, 1.2, 1.3, 1.4, 1.5),
    "gamma": (0.1, 0.2, 0.3, 0.4, 0.5, 1.0),
    "k": (0.1, 0.5, 1.0),
    "q": (0.1, 0.5, 1.0, 3.0, 5.0),
    "u": (10.0, 25.0, 50.0, 100.0, 200.0, 300.0, 400.0, 500.0, 600.0),
}

RESULT_COLUMNS = (
    "beta",
    "a_star",
    "wH",
    "wL",
    "bH",
    "bL",
    "effective_wH",
    "effective_wL",
    "profit",
    "worker_utility",
    "theft_share_H",
    "theft_share_L",
)

CSV_COLUMNS = PARAM_ORDER + RESULT_COLUMNS + ("error",)


def _as_values(raw) -> tuple[float, ...]:
    if isinstance(raw, (int, float)):
        raw = (raw,)
    values = tuple(sorted(float(v) for v in raw))
    if not values:
        raise ValueError("parameter value lists must be nonempty")
    return values


@dataclass(frozen=True)
class SweepSpec:
    """Axis designation plus the value lists for all nine parameters.

    Non-axis parameters must be pinned to a single value (the fixed context);
    axis parameters fall back to the full default grid.  Scalars are accepted
    anywhere and normalized to one-element lists.
    """

    axis: tuple[str, ...] = ("sigma",)
    P: tuple[float, ...] = GRID_DEFAULTS["P"]
    yL: tuple[float, ...] = GRID_DEFAULTS["yL"]
    yH: tuple[float, ...] = GRID_DEFAULTS["yH"]
    sigma: tuple[float, ...] = GRID_DEFAULTS["sigma"]
    p: tuple[float, ...] = GRID_DEFAULTS["p"]
    gamma: tuple[float, ...] = GRID_DEFAULTS["gamma"]
    k: tuple[float, ...] = GRID_DEFAULTS["k"]
    q: tuple[float, ...] = GRID_DEFAULTS["q"]
    u: tuple[float, ...] = GRID_DEFAULTS["u"]

    def __post_init__(self):
        axis = (self.axis,) if isinstance(self.axis, str) else tuple(self.axis)
        if not axis:
            raise ValueError("axis must name at least one parameter")
        for name in axis:
            if name not in PARAM_ORDER:
                raise ValueError(f"unknown axis parameter {name!r}")
        if len(set(axis)) != len(axis):
            raise ValueError("axis parameters must be distinct")
        object.__setattr__(self, "axis", axis)
        for name in PARAM_ORDER:
            values = _as_values(getattr(self, name))
            object.__setattr__(self, name, values)
            if name not in axis and len(values) != 1:
                raise ValueError(
                    f"fixed-context parameter {name!r} needs a single value, got {len(values)}"
                )

    @classmethod
    def from_config(cls, data: dict) -> "SweepSpec":
        known = set(PARAM_ORDER) | {"axis", "output"}
        for key in data:
            if key not in known:
                raise ValueError(f"unknown sweep key {key!r}")
        kwargs = {key: data[key] for key in data if key != "output"}
        return cls(**kwargs)

    def cells(self):
        return itertools.product(*(getattr(self, name) for name in PARAM_ORDER))


@dataclass(frozen=True)
class SweepRow:
    """One solved cell; result fields are None on an error row."""

    P: float
    yL: float
    yH: float
    sigma: float
    p: float
    gamma: float
    k: float
    q: float
    u: float
    beta: float | None = None
    a_star: float | None = None
    wH: float | None = None
    wL: float | None = None
    bH: float | None = None
    bL: float | None = None
    effective_wH: float | None = None
    effective_wL: float | None = None
    profit: float | None = None
    worker_utility: float | None = None
    theft_share_H: float | None = None
    theft_share_L: float | None = None
    error: str | None = None


def solve_cell(cell: tuple) -> SweepRow:
    """Solve one parameter tuple (PARAM_ORDER order) into a SweepRow."""
    P, yL, yH, sigma, p, gamma, k, q, u = cell
    try:
        market = MarketParams(P, yH, yL, u, gamma)
        cost_spec = CostSpec(k, q)
        penalty = PenaltySpec(sigma, p)
    except ValueError:
        return SweepRow(P, yL, yH, sigma, p, gamma, k, q, u, error="invalid-params")
    result = solve(market, cost_spec, penalty)
    c = result.contract
    return SweepRow(
        P,
        yL,
        yH,
        sigma,
        p,
        gamma,
        k,
        q,
        u,
        beta=result.beta,
        a_star=c.effort,
        wH=c.w_high,
        wL=c.w_low,
        bH=c.b_high,
        bL=c.b_low,
        effective_wH=c.w_high - c.b_high,
        effective_wL=c.w_low - c.b_low,
        profit=result.profit,
        worker_utility=result.worker_utility,
        theft_share_H=c.b_high / c.w_high if c.w_high > 0 else None,
        theft_share_L=c.b_low / c.w_low if c.w_low > 0 else None,
    )


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """Solve every cell; rows are ordered lexicographically by parameters
    regardless of the worker count."""
    cells = list(spec.cells())
    if jobs <= 1:
        return [solve_cell(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(solve_cell, cells, chunksize=max(1, len(cells) // (8 * jobs))))


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return repr(float(value))


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_format(getattr(row, name)) for name in CSV_COLUMNS])


def read_sweep_csv(path) -> list[SweepRow]:
    rows = []
    float_fields = {f.name for f in fields(SweepRow)} - {"error"}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise ValueError(f"sweep CSV missing columns: {', '.join(missing)}")
        for record in reader:
            kwargs = {}
            for name in CSV_COLUMNS:
                raw = record[name]
                if raw == "":
                    kwargs[name] = None
                elif name in float_fields:
                    kwargs[name] = float(raw)
                else:
                    kwargs[name] = raw
            rows.append(SweepRow(**kwargs))
    return rows


_TREND_PARAMS = ("sigma", "gamma", "u", "k", "q")

# Trend slacks. Wage-space quantities inherit the effort optimizer's noise
# floor amplified by the cost curvature (flat objective near the argmax, so
# the located effort wobbles by ~1e-9 and c'' can be 1e4 or more), hence the
# looser relative slack; effort itself only carries the plateau wobble.
_WAGE_SLACK = 1e-6
_EFFORT_SLACK = 1e-8


def _nonincreasing(values, rel: float) -> float:
    """Largest upward violation of a non-increasing sequence (0 when clean)."""
    worst = 0.0
    for prev, curr in zip(values, values[1:]):
        slack = rel * (1.0 + abs(prev))
        worst = max(worst, curr - prev - slack)
    return max(worst, 0.0)


def _nondecreasing(values, rel: float) -> float:
    worst = 0.0
    for prev, curr in zip(values, values[1:]):
        slack = rel * (1.0 + abs(prev))
        worst = max(worst, prev - curr - slack)
    return max(worst, 0.0)


def qualitative_checks(rows, axis: str | None = None) -> CheckReport:
    """Trend assertions for the recognized sweep families.

    sigma/gamma sweeps: high-output theft falls as enforcement stiffens and
    vanishes for large sigma; u sweeps: promised wages rise with the outside
    option while the ideal theft ignores it; k/q sweeps: costlier effort
    means a higher promised high wage (k) and less induced effort.

    Low-output theft is deliberately unchecked: inside the full-theft regime
    it equals the promised low wage, which moves non-monotonically with the
    distorted effort choice.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to check")
    if axis is None:
        varying = [
            name
            for name in PARAM_ORDER
            if len({getattr(r, name) for r in rows}) > 1
        ]
        trendable = [name for name in varying if name in _TREND_PARAMS]
        if len(trendable) != 1:
            raise ValueError(
                "unrecognized sweep family: expected exactly one varying parameter "
                f"among {_TREND_PARAMS}, found {trendable or varying}"
            )
        axis = trendable[0]
    elif axis not in _TREND_PARAMS:
        raise ValueError(f"unrecognized sweep family: no trend checks for axis {axis!r}")

    lines = []
    bad = [r for r in rows if r.error is not None]
    if bad:
        lines.append(CheckLine("no-error-rows", False, float(len(bad))))
        rows = [r for r in rows if r.error is None]
        if not rows:
            return CheckReport(tuple(lines))

    group_params = [name for name in PARAM_ORDER if name != axis]
    groups: dict[tuple, list[SweepRow]] = {}
    for row in rows:
        groups.setdefault(tuple(getattr(row, name) for name in group_params), []).append(row)

    many = len(groups) > 1
    for gi, key in enumerate(sorted(groups)):
        series = sorted(groups[key], key=lambda r: getattr(r, axis))
        tag = f"#{gi}" if many else ""

        def add(name: str, deviation: float):
            lines.append(CheckLine(name + tag, deviation == 0.0, deviation))

        bh = [r.bH for r in series]
        wh = [r.wH for r in series]
        a = [r.a_star for r in series]
        beta = [r.beta for r in series]
        if axis in ("sigma", "gamma"):
            add("theft-high-nonincreasing", _nonincreasing(bh, _WAGE_SLACK))
            if axis == "sigma":
                # A two-orders-of-magnitude collapse is only a fair ask when
                # the axis itself spans at least a decade.
                sig = [getattr(r, axis) for r in series]
                if sig[0] > 0.0 and sig[-1] / sig[0] >= 10.0:
                    first, last = bh[0], bh[-1]
                    if first > 1e-9:
                        decay = max(0.0, last - 1e-2 * first)
                    else:
                        decay = 0.0
                    add("theft-high-decays", decay)
        elif axis == "u":
            add("w-high-nondecreasing", _nondecreasing(wh, _WAGE_SLACK))
            add("w-low-nondecreasing", _nondecreasing([r.wL for r in series], _WAGE_SLACK))
            add("beta-constant", 0.0 if len(set(beta)) == 1 else max(beta) - min(beta))
        elif axis == "k":
            add("w-high-nondecreasing", _nondecreasing(wh, _WAGE_SLACK))
            add("effort-nonincreasing", _nonincreasing(a, _EFFORT_SLACK))
        else:  # q
            add("effort-nonincreasing", _nonincreasing(a, _EFFORT_SLACK))
    return CheckReport(tuple(lines))
