"""Plain-text timing table from harness CSVs.

Rows are (dataset, budget) pairs, columns are methods; a cell shows the
selection milliseconds, with "+<shapley_ms>" appended where the method paid
for a Shapley estimation. Missing cells render as an em dash; the totals row
holds per-column sums of the same quantities.
"""

from __future__ import annotations

from .results import read_results

_DASH = "—"


def _cell(select_ms, shapley_ms):
    if shapley_ms is None:
        return f"{select_ms:.3f}"
    return f"{select_ms:.3f}+{shapley_ms:.3f}"


def render_timing_table(csv_paths):
    """Merge the CSVs into one table string (milliseconds)."""
    rows = []
    for path in csv_paths:
        rows.extend(read_results(path))
    methods = []
    for row in rows:
        if row.method not in methods:
            methods.append(row.method)
    keys = []
    cells = {}
    for row in rows:
        key = (row.dataset, row.budget)
        if key not in cells:
            keys.append(key)
            cells[key] = {}
        cells[key][row.method] = (row.select_ms, row.shapley_ms)
    keys.sort()

    header = ["dataset", "budget"] + methods
    table = [header]
    totals = {m: [0.0, 0.0, False, False] for m in methods}  # sel, shap, seen, has_shap
    for dataset, budget in keys:
        line = [dataset, str(budget)]
        for method in methods:
            entry = cells[(dataset, budget)].get(method)
            if entry is None:
                line.append(_DASH)
                continue
            select_ms, shapley_ms = entry
            line.append(_cell(select_ms, shapley_ms))
            tot = totals[method]
            tot[0] += select_ms
            tot[2] = True
            if shapley_ms is not None:
                tot[1] += shapley_ms
                tot[3] = True
        table.append(line)
    total_line = ["total", ""]
    for method in methods:
        sel, shap, seen, has_shap = totals[method]
        total_line.append(_cell(sel, shap if has_shap else None) if seen else _DASH)
    table.append(total_line)

    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
