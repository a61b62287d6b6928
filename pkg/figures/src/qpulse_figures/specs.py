"""Figure layouts: which CSV columns each panel draws.

A series is either a plain column name or one of the derived quantities
below, assembled from columns at render time. The x axis is always the
record time converted to carrier periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .csvdata import FigureDataError

TWO_PI = 2.0 * math.pi

# derived name -> (required columns, builder)
DERIVED = {
    "|g|": (("g_re", "g_im"), lambda d: np.hypot(d["g_re"], d["g_im"])),
    "dE/dt": (("J", "P"), lambda d: d["J"] + d["P"]),
    "dE_D/dt": (("J_D", "PD"), lambda d: d["J_D"] + d["PD"]),
    "dE_A/dt": (("J_A",), lambda d: d["J_A"]),
}


@dataclass(frozen=True)
class Panel:
    title: str
    series: tuple
    ylabel: str = ""
    logy: bool = False


@dataclass(frozen=True)
class FigureSpec:
    name: str
    panels: tuple
    sources: tuple = ("csv",)          # one entry per input CSV slot
    xlabel: str = "ω₀t/2π"   # omega0*t/2pi

    @property
    def n_panels(self):
        return len(self.panels)


def required_columns(series_name):
    if series_name in DERIVED:
        return DERIVED[series_name][0]
    return (series_name,)


def build_series(data, series_name):
    if series_name in DERIVED:
        needed, builder = DERIVED[series_name]
        for col in needed:
            data[col]   # raises FigureDataError if absent
        return builder(data)
    return data[series_name]


def validate_columns(spec, datasets):
    """Every referenced column must exist before any rendering starts."""
    for panel in spec.panels:
        for source_idx, series_name in panel.series:
            data = datasets[source_idx]
            for col in required_columns(series_name) + ("t",):
                if col not in data:
                    raise FigureDataError(
                        f"{data.path}: column {col!r} needed by panel "
                        f"{panel.title!r} is missing"
                    )


def _single(names):
    return tuple((0, n) for n in names)


BUILTIN_SPECS = {
    # five-panel two-level summary
    "fig2": FigureSpec(
        name="fig2",
        panels=(
            Panel("populations and drive", _single(("rho00_re", "rho11_re", "rho01_re", "|g|"))),
            Panel("energy change and power", _single(("dE/dt", "P"))),
            Panel("heat current", _single(("J",))),
            Panel("energy, work, heat, entropy", _single(("E", "W", "Q", "S"))),
            Panel("entropy rate and production", _single(("dSdt", "sigma"))),
        ),
    ),
    # four-panel photocell summary
    "fig7": FigureSpec(
        name="fig7",
        panels=(
            Panel("level populations and drive", _single(("rho00", "rho11", "rho22", "rho33", "|g|"))),
            Panel("donor/acceptor energy flow", _single(("PD", "J_D", "J_A", "dE_D/dt", "dE_A/dt"))),
            Panel("entropies", _single(("S", "S_D", "S_A"))),
            Panel("electrical output", _single(("I", "V", "Pout", "PD", "eta"))),
        ),
    ),
    # discrete vs continuum efficiency comparison; two input CSVs
    "fig8": FigureSpec(
        name="fig8",
        sources=("csv", "csv2"),
        panels=(
            Panel("discrete mode", ((0, "eta"),), ylabel="eta"),
            Panel("continuum mode", ((1, "eta"),), ylabel="eta"),
        ),
    ),
}
BUILTIN_SPECS["fig3"] = FigureSpec(name="fig3", panels=BUILTIN_SPECS["fig2"].panels)
BUILTIN_SPECS["fig4"] = FigureSpec(name="fig4", panels=BUILTIN_SPECS["fig2"].panels)
BUILTIN_SPECS["fig5"] = FigureSpec(name="fig5", panels=BUILTIN_SPECS["fig2"].panels)


def builtin_spec(name):
    if name not in BUILTIN_SPECS:
        raise FigureDataError(
            f"unknown figure spec {name!r}; known: {', '.join(sorted(BUILTIN_SPECS))}"
        )
    return BUILTIN_SPECS[name]


def custom_spec(panels_text):
    """Spec from 'col1,col2;col3' syntax: panels split by ';', series by ','."""
    panels = []
    for i, chunk in enumerate(panels_text.split(";")):
        names = tuple(n.strip() for n in chunk.split(",") if n.strip())
        if not names:
            raise FigureDataError("empty panel in --panels")
        panels.append(Panel(f"panel {i + 1}", _single(names)))
    if not panels:
        raise FigureDataError("--panels needs at least one panel")
    return FigureSpec(name="custom", panels=tuple(panels))
