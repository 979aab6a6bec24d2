"""Figure panels for wage-theft sweep results.

Consumes the sweep CSV schema (parameters, result columns, error tag) and
renders dual-axis panels: wages and theft on the left axis, effort on the
right.  Deterministic output given an identical CSV.
"""

from .panel import (
    PARAM_COLUMNS,
    RIGHT_AXIS,
    SERIES_COLUMNS,
    SERIES_STYLE,
    PanelSpec,
    load_panel_spec,
    render_panel,
)

__version__ = "0.1.0"

__all__ = [
    "PARAM_COLUMNS",
    "RIGHT_AXIS",
    "SERIES_COLUMNS",
    "SERIES_STYLE",
    "PanelSpec",
    "load_panel_spec",
    "render_panel",
]
