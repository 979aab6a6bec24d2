"""Dual-axis figure panels from sweep CSV files.

Reads the delimited output of the `wagetheft sweep` tool by its documented
schema (nine parameter columns, the result columns, then an ``error`` tag)
and renders one panel per call: wages and theft quantities on the left
axis, the optimal effort level on the right.  Style is pinned per series
name so panels stay comparable across runs and contexts, and the output
carries no timestamps or salted ids, so re-rendering an unchanged CSV
reproduces the image byte for byte.

The CSV is consumed purely through its schema; this package never imports
the solver.  Rows whose ``error`` cell is nonempty are skipped, as are
blank cells (a share that is undefined at a zero wage) and non-finite
values (an infinite ideal theft under a zero inspection rate has no place
on a finite axis).
"""

import csv
import json
import math
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

PARAM_COLUMNS = ("P", "yL", "yH", "sigma", "p", "gamma", "k", "q", "u")

SERIES_COLUMNS = (
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

# Series drawn against the right-hand axis; everything else shares the left.
RIGHT_AXIS = frozenset({"a_star"})

# color, marker, linestyle - fixed by series name for cross-run comparability
SERIES_STYLE = {
    "wH": ("#1f77b4", "o", "-"),
    "wL": ("#ff7f0e", "s", "-"),
    "effective_wH": ("#1f77b4", "^", "--"),
    "effective_wL": ("#ff7f0e", "v", "--"),
    "bH": ("#d62728", "x", "-"),
    "bL": ("#9467bd", "+", "-"),
    "beta": ("#8c564b", "*", ":"),
    "a_star": ("#2ca02c", "D", "-."),
    "profit": ("#7f7f7f", ".", "-"),
    "worker_utility": ("#17becf", ".", "--"),
    "theft_share_H": ("#d62728", "o", ":"),
    "theft_share_L": ("#9467bd", "s", ":"),
}

# Pinned rendering style.  svg.fonttype "none" keeps label text as text (so
# the files are small and inspectable) and svg.hashsalt fixes the generated
# element ids, which together with metadata={"Date": None} makes SVG output
# reproducible byte for byte.
_RC = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.framealpha": 0.9,
    "svg.fonttype": "none",
    "svg.hashsalt": "wtfigures",
}

_SUFFIXES = (".svg", ".png")


@dataclass(frozen=True)
class PanelSpec:
    """One panel: which CSV, which x parameter, which series, where to."""

    csv: str
    x: str
    series: tuple[str, ...]
    output: str
    title: str = ""
    x_label: str = ""
    left_label: str = "wage"
    right_label: str = "effort"

    def __post_init__(self):
        if self.x not in PARAM_COLUMNS:
            raise ValueError(f"x-axis column {self.x!r} is not a sweep parameter")
        series = tuple(self.series)
        if not series:
            raise ValueError("series must name at least one result column")
        for name in series:
            if name not in SERIES_COLUMNS:
                raise ValueError(f"series {name!r} is not a sweep result column")
        object.__setattr__(self, "series", series)
        if not str(self.csv):
            raise ValueError("csv path must be nonempty")
        if not str(self.output).endswith(_SUFFIXES):
            raise ValueError(f"output must end in one of {_SUFFIXES}")


def load_panel_spec(path, csv_path=None, output=None) -> PanelSpec:
    """Read a PanelSpec from a small JSON file.

    Relative ``csv`` and ``output`` paths in the file resolve against the
    file's own directory; the ``csv_path`` and ``output`` overrides are
    used verbatim.
    """
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("panel spec must be a JSON object")
    known = {"csv", "x", "series", "output", "title", "x_label", "left_label", "right_label"}
    for key in raw:
        if key not in known:
            raise ValueError(f"unknown panel spec key {key!r}")
    for key in ("csv", "x", "series", "output"):
        if key not in raw:
            raise ValueError(f"panel spec is missing {key!r}")
    base = os.path.dirname(os.path.abspath(path))

    def resolve(value):
        value = str(value)
        return value if os.path.isabs(value) else os.path.join(base, value)

    raw["csv"] = csv_path if csv_path is not None else resolve(raw["csv"])
    raw["output"] = output if output is not None else resolve(raw["output"])
    raw["series"] = tuple(str(s) for s in raw["series"])
    return PanelSpec(**raw)


def _read_groups(spec: PanelSpec):
    """Rows of the CSV, grouped by every parameter other than the x axis."""
    with open(spec.csv, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or ()
        for name in (spec.x, *spec.series):
            if name not in header:
                raise ValueError(f"column {name!r} missing from {spec.csv}")
        rows = list(reader)

    group_cols = [c for c in PARAM_COLUMNS if c in header and c != spec.x]
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        if row.get("error"):
            continue
        key = tuple(float(row[c]) for c in group_cols)
        groups.setdefault(key, []).append(row)
    for members in groups.values():
        members.sort(key=lambda row: float(row[spec.x]))

    # label suffixes only mention the parameters that actually differ
    diff = [
        (i, c)
        for i, c in enumerate(group_cols)
        if len({key[i] for key in groups}) > 1
    ]
    labeled = []
    for key in sorted(groups):
        suffix = ""
        if diff:
            parts = ", ".join(f"{c}={key[i]:g}" for i, c in diff)
            suffix = f" ({parts})"
        labeled.append((suffix, groups[key]))
    return labeled


def render_panel(spec: PanelSpec) -> str:
    """Render one dual-axis panel and return the output path."""
    labeled = _read_groups(spec)
    with plt.rc_context(_RC):
        fig, left = plt.subplots()
        right = left.twinx() if any(s in RIGHT_AXIS for s in spec.series) else None
        handles = []
        for suffix, rows in labeled:
            for name in spec.series:
                xs, ys = [], []
                for row in rows:
                    raw = row[name]
                    if raw == "":
                        continue
                    value = float(raw)
                    if not math.isfinite(value):
                        continue
                    xs.append(float(row[spec.x]))
                    ys.append(value)
                color, marker, style = SERIES_STYLE[name]
                axis = right if name in RIGHT_AXIS else left
                (handle,) = axis.plot(
                    xs,
                    ys,
                    color=color,
                    marker=marker,
                    linestyle=style,
                    markersize=4,
                    linewidth=1.2,
                    label=name + suffix,
                )
                handles.append(handle)
        left.set_xlabel(spec.x_label or spec.x)
        left.set_ylabel(spec.left_label)
        if right is not None:
            right.set_ylabel(spec.right_label)
            right.grid(False)
        if spec.title:
            left.set_title(spec.title)
        left.legend(handles=handles, fontsize=8, ncol=2, loc="best")
        fig.tight_layout()
        metadata = {"Date": None} if spec.output.endswith(".svg") else None
        fig.savefig(spec.output, metadata=metadata)
        plt.close(fig)
    return spec.output
