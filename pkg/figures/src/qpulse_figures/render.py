"""Render a FigureSpec to an image file.

Inputs are never modified; output is deterministic for identical CSVs
(fixed layout, fixed dpi, no timestamps in the PNG metadata).
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .csvdata import FigureDataError, load_csv
from .specs import TWO_PI, build_series, validate_columns


@dataclass(frozen=True)
class RenderResult:
    path: str
    n_panels: int


def render(spec, csv_paths, output_path, dpi=130):
    """Draw every panel of spec from the given CSVs and write the image.

    csv_paths supplies one path per spec source slot. All column checks run
    before any drawing, so a bad input never produces a blank image.
    """
    if isinstance(csv_paths, (str, bytes)):
        csv_paths = (csv_paths,)
    if len(csv_paths) != len(spec.sources):
        raise FigureDataError(
            f"spec {spec.name!r} needs {len(spec.sources)} CSV file(s), "
            f"got {len(csv_paths)}"
        )
    datasets = [load_csv(p) for p in csv_paths]
    validate_columns(spec, datasets)

    n = spec.n_panels
    fig, axes = plt.subplots(n, 1, figsize=(7.0, 2.2 * n), sharex=True,
                             squeeze=False)
    axes = axes[:, 0]
    for ax, panel in zip(axes, spec.panels):
        for source_idx, series_name in panel.series:
            data = datasets[source_idx]
            x = data["t"] / TWO_PI
            y = build_series(data, series_name)
            ax.plot(x, y, label=series_name, linewidth=1.0)
        ax.set_title(panel.title, fontsize=9)
        if panel.ylabel:
            ax.set_ylabel(panel.ylabel, fontsize=8)
        if panel.logy:
            ax.set_yscale("log")
        ax.legend(fontsize=7, ncols=min(len(panel.series), 5), loc="best")
        ax.tick_params(labelsize=8)
        ax.grid(True, alpha=0.25)
    axes[-1].set_xlabel(spec.xlabel, fontsize=9)
    fig.tight_layout()
    try:
        fig.savefig(output_path, dpi=dpi, metadata={"Software": None})
    finally:
        plt.close(fig)
    return RenderResult(path=str(output_path), n_panels=n)
