"""CSV loading and multi-panel rendering.

Expected CSV schema (header row):
t,att_err,mode,e_h_norm,gamma_err_x,gamma_err_y,gamma_err_z,psi,lyapunov,ortho_defect,jump_flag
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

# panel name -> (column(s), y label)
PANELS = {
    "att_err": (("att_err",), "attitude error"),
    "mode": (("mode",), "mode"),
    "e_h_norm": (("e_h_norm",), "innovation norm"),
    "gamma_err": (("gamma_err_x", "gamma_err_y", "gamma_err_z"),
                  "bias error norm"),
    "ortho_defect": (("ortho_defect",), "orthogonality defect"),
}

# series whose label contains one of these keys get a fixed color, the
# conventional pairing for observer comparisons
LABEL_COLORS = {"hybrid": "tab:blue", "complementary": "tab:red"}


class SchemaError(Exception):
    """CSV is missing a column required by a requested panel."""


@dataclass(frozen=True)
class SeriesInput:
    path: str
    label: str


@dataclass(frozen=True)
class FigureSpec:
    inputs: list[SeriesInput]
    panels: list[str]
    out: str

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("need at least one input CSV")
        if not self.panels:
            raise ValueError("need at least one panel")
        unknown = [p for p in self.panels if p not in PANELS]
        if unknown:
            raise ValueError(f"unknown panels {unknown}; "
                             f"choose from {sorted(PANELS)}")


def load_series(path: str) -> dict[str, list[float]]:
    """Read one CSV into columns keyed by header name."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file")
        cols: dict[str, list[float]] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in cols:
                cols[name].append(float(row[name]))
    return cols


def _panel_values(cols: dict[str, list[float]], panel: str, path: str
                  ) -> list[float]:
    names, _ = PANELS[panel]
    for name in names + ("t",):
        if name not in cols:
            raise SchemaError(f"{path}: missing column {name!r} "
                              f"required by panel {panel!r}")
    if len(names) == 1:
        return cols[names[0]]
    return [math.sqrt(sum(cols[n][i] ** 2 for n in names))
            for i in range(len(cols["t"]))]


def _color_for(label: str) -> str | None:
    for key, color in LABEL_COLORS.items():
        if key in label.lower():
            return color
    return None


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec``; returns the output path.

    Raises:
        SchemaError: an input lacks a column needed by a panel.
    """
    series = [(inp, load_series(inp.path)) for inp in spec.inputs]
    n = len(spec.panels)
    fig, axes = plt.subplots(n, 1, figsize=(7.0, 2.2 * n), sharex=True,
                             squeeze=False)
    for ax, panel in zip(axes[:, 0], spec.panels):
        _, ylabel = PANELS[panel]
        for inp, cols in series:
            values = _panel_values(cols, panel, inp.path)
            kwargs = {"label": inp.label}
            color = _color_for(inp.label)
            if color is not None:
                kwargs["color"] = color
            if panel == "mode":
                ax.step(cols["t"], values, where="post", **kwargs)
                ax.set_yticks([1, 2, 3])
            else:
                ax.plot(cols["t"], values, **kwargs)
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        if len(series) > 1:
            ax.legend(loc="upper right", fontsize="small")
    axes[-1, 0].set_xlabel("time [s]")
    fig.tight_layout()
    fig.savefig(spec.out, dpi=150)
    plt.close(fig)
    return spec.out
