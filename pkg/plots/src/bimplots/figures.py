"""Budget-vs-spread figures, one per probability scheme (one per input CSV).

Rendering is pinned for byte-stable output: Agg backend, fixed style and
dpi, no timestamps or version metadata in the PNG. Every plotted y value is
exactly the spread cell parsed from the CSV.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .results import read_results, scheme_label

_STYLE = {
    "BIMGT": {"color": "#1f77b4", "marker": "o"},
    "BIMGTC": {"color": "#d62728", "marker": "s"},
    "MDH": {"color": "#2ca02c", "marker": "^"},
    "MCCH": {"color": "#9467bd", "marker": "v"},
    "RAND": {"color": "#7f7f7f", "marker": "x"},
}
_FALLBACK = {"color": "#8c564b", "marker": "d"}


@dataclass
class FigureSpec:
    """What to render: input CSVs (one figure each), output directory, format."""

    csv_paths: list
    out_dir: str
    fmt: str = "png"
    dpi: int = 120
    labels: dict = field(default_factory=dict)  # csv path -> figure label


def series_by_method(rows):
    """method -> (budgets ascending, spreads in that order), values verbatim."""
    methods = []
    for row in rows:
        if row.method not in methods:
            methods.append(row.method)
    out = {}
    for method in methods:
        mine = sorted((r for r in rows if r.method == method), key=lambda r: r.budget)
        out[method] = ([r.budget for r in mine], [r.spread for r in mine])
    return out


def build_figure(rows, title):
    """Matplotlib figure with one line per method; returns (fig, ax)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for method, (budgets, spreads) in series_by_method(rows).items():
        style = _STYLE.get(method, _FALLBACK)
        ax.plot(budgets, spreads, label=method, linewidth=1.6,
                markersize=4.5, **style)
    ax.set_xlabel("budget")
    ax.set_ylabel("expected influence")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig, ax


def render_budget_vs_spread(spec):
    """Render one figure per CSV in the spec; returns the written paths."""
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for csv_path in spec.csv_paths:
        rows = read_results(csv_path)  # validates before any file is written
        label = spec.labels.get(str(csv_path)) or scheme_label(csv_path)
        dataset = rows[0].dataset
        fig, _ = build_figure(rows, f"{dataset} — {label}")
        out = out_dir / f"budget_vs_spread_{_slug(dataset)}_{_slug(label)}.{spec.fmt}"
        fig.savefig(out, dpi=spec.dpi, metadata=_stable_metadata(spec.fmt))
        plt.close(fig)
        written.append(str(out))
    return written


def _stable_metadata(fmt):
    if fmt == "png":
        return {"Software": None}  # drop the version string matplotlib embeds
    if fmt == "svg":
        return {"Date": None}
    return None


def _slug(text):
    return "".join(ch if ch.isalnum() else "-" for ch in str(text))
