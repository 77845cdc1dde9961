"""Reading and validating the harness result CSV contract.

The expected header is fixed: dataset,method,budget,spread,seeds,cost,
select_ms,shapley_ms. Values are kept exactly as parsed; nothing downstream
recomputes or rescales them.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

EXPECTED_COLUMNS = ("dataset", "method", "budget", "spread", "seeds", "cost",
                    "select_ms", "shapley_ms")


class ResultFormatError(ValueError):
    """Result CSV does not match the harness contract."""


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    method: str
    budget: int
    spread: float
    seeds: int
    cost: int
    select_ms: float
    shapley_ms: float | None


def read_results(path):
    """Parse one harness CSV into rows; header and row shape are enforced."""
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ResultFormatError(f"{path}: empty file") from None
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        if missing:
            raise ResultFormatError(f"{path}: missing column {missing[0]!r}")
        index = {c: header.index(c) for c in EXPECTED_COLUMNS}
        rows = []
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != len(header):
                raise ResultFormatError(
                    f"{path}: line {lineno}: {len(cells)} cells, expected {len(header)}")
            shap = cells[index["shapley_ms"]]
            rows.append(ResultRow(
                dataset=cells[index["dataset"]],
                method=cells[index["method"]],
                budget=int(cells[index["budget"]]),
                spread=float(cells[index["spread"]]),
                seeds=int(cells[index["seeds"]]),
                cost=int(cells[index["cost"]]),
                select_ms=float(cells[index["select_ms"]]),
                shapley_ms=float(shap) if shap else None,
            ))
    if not rows:
        raise ResultFormatError(f"{path}: no data rows")
    return rows


def scheme_label(csv_path):
    """Figure label for one CSV: the scheme from the sidecar JSON the harness
    writes next to it, falling back to the file stem."""
    sidecar = Path(csv_path).with_suffix(".json")
    if sidecar.exists():
        try:
            config = json.loads(sidecar.read_text(encoding="utf-8")).get("config", {})
            if config.get("scheme"):
                return str(config["scheme"])
        except (OSError, json.JSONDecodeError):
            pass
    return Path(csv_path).stem
