"""Experiment orchestration: one probability scheme, a budget sweep over
methods, timing, and CSV/JSON result emission.

A run loads the graph once, assigns probabilities and costs from seeds
derived off the master seed, builds the diffusion cache once, estimates
Shapley values once (they do not depend on the budget), then fills the
(method x budget) grid. Identical config + seed means identical outputs;
set `timing = off` to zero the wall-clock columns when byte-stable files
matter more than measurements.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .community import detect_communities
from .graph import ProbabilityScheme, assign_costs, assign_probabilities, load_edge_list
from .mia import build_miia_cache, sigma
from .selection import BASELINES, select_baseline, select_bimgt, select_bimgtc
from .shapley import BimGame, SamplingPlan, aggregate_range, estimate_shapley

DEFAULT_BUDGETS = (2000, 6000, 10000, 14000, 18000, 22000, 26000)
ALL_METHODS = ("BIMGT", "BIMGTC", "MDH", "MCCH", "RAND")
CSV_HEADER = "dataset,method,budget,spread,seeds,cost,select_ms,shapley_ms"

# seed-stream indices hung off the master seed
_STREAM_TRIVALENCY = 0
_STREAM_COSTS = 1
_STREAM_COMMUNITIES = 2
_STREAM_SHAPLEY = 3
_STREAM_RAND = 4


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


def derived_seed(master, stream):
    """Stable per-stage RNG seed derived from the master seed."""
    return int(np.random.SeedSequence([int(master), int(stream)]).generate_state(1)[0])


@dataclass
class ExperimentConfig:
    graph: str = ""
    directed: bool = False
    dataset: str = ""
    scheme: str = "weighted_cascade"
    cost_interval: tuple = (50, 100)
    cost_file: str | None = None
    cost_seed: int | None = None
    budgets: tuple = DEFAULT_BUDGETS
    theta: float = 0.01
    epsilon: float = 0.1
    delta: float = 0.1
    repetitions: int = 1
    tau_cap: int | None = None
    methods: tuple = ALL_METHODS
    seed: int = 0
    out_dir: str = "results"
    timing: str = "wall"
    workers: int = 1

    def __post_init__(self):
        if not self.dataset and self.graph:
            self.dataset = Path(self.graph).stem

    def validate(self):
        if not self.graph:
            raise ConfigError("no graph file configured")
        if not self.methods:
            raise ConfigError("method list is empty")
        bad = [mth for mth in self.methods if mth not in ALL_METHODS]
        if bad:
            raise ConfigError(f"unknown methods {bad}; valid: {ALL_METHODS}")
        if not self.budgets:
            raise ConfigError("budget list is empty")
        if any(b <= 0 for b in self.budgets):
            raise ConfigError("budgets must be positive")
        if any(b2 <= b1 for b1, b2 in zip(self.budgets, self.budgets[1:])):
            raise ConfigError("budgets must be strictly increasing")
        if not (0.0 < self.theta <= 1.0):
            raise ConfigError(f"theta must lie in (0,1], got {self.theta}")
        if self.timing not in ("wall", "off"):
            raise ConfigError(f"timing must be wall|off, got {self.timing!r}")
        if self.cost_file is None and self.cost_interval is None:
            raise ConfigError("configure cost_interval or cost_file")
        ProbabilityScheme.parse(self.scheme, seed=0)  # syntax check
        return self

    def to_dict(self):
        d = asdict(self)
        d["cost_interval"] = list(self.cost_interval) if self.cost_interval else None
        d["budgets"] = list(self.budgets)
        d["methods"] = list(self.methods)
        return d

    @classmethod
    def from_dict(cls, d):
        kwargs = dict(d)
        if kwargs.get("cost_interval"):
            kwargs["cost_interval"] = tuple(int(x) for x in kwargs["cost_interval"])
        if kwargs.get("budgets"):
            kwargs["budgets"] = tuple(int(b) for b in kwargs["budgets"])
        if kwargs.get("methods"):
            kwargs["methods"] = tuple(kwargs["methods"])
        unknown = set(kwargs) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        """Parse the plain-text `key = value` config format ('#' comments)."""
        raw = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                s = line.strip()
                if not s or s.startswith("#"):
                    continue
                key, eq, value = s.partition("=")
                if not eq:
                    raise ConfigError(f"{path}: line {lineno}: expected 'key = value'")
                raw[key.strip()] = value.strip()
        return cls.from_dict(_coerce_config_strings(raw))


def _coerce_config_strings(raw):
    out = {}
    for key, value in raw.items():
        if key in ("directed",):
            out[key] = value.lower() in ("1", "true", "yes")
        elif key in ("budgets",):
            out[key] = tuple(int(x) for x in value.split(","))
        elif key in ("cost_interval",):
            out[key] = tuple(int(x) for x in value.split(","))
        elif key in ("methods",):
            out[key] = tuple(x.strip() for x in value.split(","))
        elif key in ("theta", "epsilon", "delta"):
            out[key] = float(value)
        elif key in ("repetitions", "seed", "workers", "tau_cap", "cost_seed"):
            out[key] = int(value)
        else:
            out[key] = value
    return out


@dataclass
class ResultRow:
    dataset: str
    method: str
    budget: int
    spread: float
    seeds: int
    cost: int
    select_ms: float
    shapley_ms: float | None
    seeds_file: str = ""

    def csv_line(self):
        shap = "" if self.shapley_ms is None else f"{self.shapley_ms:.3f}"
        return (f"{self.dataset},{self.method},{self.budget},{float(self.spread)!r},"
                f"{self.seeds},{self.cost},{self.select_ms:.3f},{shap}")


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:
        raise StageError(name, exc) from exc


def run_experiment(config):
    """Run the full (method x budget) grid for one probability scheme.

    Returns (rows, stage_ms). Writes per-cell seed files plus results CSV and
    JSON under config.out_dir; on failure, rows finished so far are flushed
    to a '.partial' CSV before the StageError propagates.
    """
    config.validate()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    timing_on = config.timing == "wall"
    clk = time.perf_counter
    stage_ms = {}
    rows = []

    def took(name, t0):
        stage_ms[name] = (clk() - t0) * 1000.0 if timing_on else 0.0

    try:
        t0 = clk()
        graph = _stage("load_graph", load_edge_list, config.graph, config.directed)
        took("load_graph", t0)

        scheme = ProbabilityScheme.parse(
            config.scheme, seed=derived_seed(config.seed, _STREAM_TRIVALENCY))
        graph = _stage("assign_probabilities", assign_probabilities, graph, scheme)

        t0 = clk()
        if config.cost_file:
            costs = _stage("assign_costs", assign_costs, graph, path=config.cost_file)
        else:
            cseed = (config.cost_seed if config.cost_seed is not None
                     else derived_seed(config.seed, _STREAM_COSTS))
            costs = _stage("assign_costs", assign_costs, graph,
                           interval=config.cost_interval, seed=cseed)
        took("assign_costs", t0)

        t0 = clk()
        cache = _stage("build_cache", build_miia_cache, graph, config.theta)
        took("build_cache", t0)

        phi = None
        shapley_ms = None
        if "BIMGT" in config.methods or "BIMGTC" in config.methods:
            t0 = clk()
            game = BimGame(cache)
            plan = SamplingPlan.from_error_bound(
                config.epsilon, config.delta, aggregate_range(graph),
                tau_cap=config.tau_cap, repetitions=config.repetitions)
            estimate = _stage("estimate_shapley", estimate_shapley, game, plan,
                              derived_seed(config.seed, _STREAM_SHAPLEY),
                              workers=config.workers)
            phi = estimate.phi
            shapley_ms = (clk() - t0) * 1000.0 if timing_on else 0.0
            stage_ms["estimate_shapley"] = shapley_ms

        partition = None
        if "BIMGTC" in config.methods:
            t0 = clk()
            partition = _stage("detect_communities", detect_communities, graph,
                               derived_seed(config.seed, _STREAM_COMMUNITIES))
            took("detect_communities", t0)

        rand_seed = derived_seed(config.seed, _STREAM_RAND)
        for method in config.methods:
            for budget in config.budgets:
                t0 = clk()
                if method == "BIMGT":
                    seeds = _stage("select", select_bimgt, graph, costs, budget, phi)
                elif method == "BIMGTC":
                    seeds = _stage("select", select_bimgtc, graph, costs, budget,
                                   phi, partition)
                else:
                    seeds = _stage("select", select_baseline, graph, costs, budget,
                                   method, seed=rand_seed)
                select_ms = (clk() - t0) * 1000.0 if timing_on else 0.0
                seeds.spread = _stage("evaluate", sigma, cache, seeds.nodes, graph)
                seeds_file = out_dir / (
                    f"seeds_{config.dataset}_{_slug(config.scheme)}_{method}_{budget}.json")
                _write_seeds(seeds_file, graph, seeds)
                rows.append(ResultRow(
                    dataset=config.dataset, method=method, budget=int(budget),
                    spread=float(seeds.spread), seeds=len(seeds.nodes),
                    cost=int(seeds.total_cost), select_ms=select_ms,
                    shapley_ms=shapley_ms if method in ("BIMGT", "BIMGTC") else None,
                    seeds_file=str(seeds_file)))
    except StageError:
        if rows:
            partial = out_dir / f"results_{config.dataset}_{_slug(config.scheme)}.partial.csv"
            _write_csv(partial, rows)
        raise
    return rows, stage_ms


def _slug(text):
    return "".join(ch if ch.isalnum() else "-" for ch in text)


def _write_seeds(path, graph, seeds):
    record = {
        "method": seeds.method,
        "budget": seeds.budget,
        "seeds": [graph.raw_ids[u] for u in seeds.nodes],
        "total_cost": seeds.total_cost,
        "spread": seeds.spread,
    }
    Path(path).write_text(json.dumps(record, indent=1) + "\n", encoding="utf-8")


def load_seeds(path, graph):
    """Seed node indices from a seeds JSON file."""
    record = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return [graph.id_of[tok] for tok in record["seeds"]]
    except KeyError as exc:
        raise ValueError(f"{path}: unknown node identifier {exc}") from exc


def _write_csv(path, rows):
    lines = [CSV_HEADER] + [row.csv_line() for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def emit_results(rows, config, formats=("csv", "json")):
    """Write the result table; CSV keeps the fixed header contract, JSON adds
    the resolved config for provenance. Returns {format: path}."""
    if not rows:
        raise ValueError("no result rows to emit")
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = f"results_{config.dataset}_{_slug(config.scheme)}"
    paths = {}
    if "csv" in formats:
        paths["csv"] = str(_write_csv(out_dir / f"{base}.csv", rows))
    if "json" in formats:
        payload = {
            "config": config.to_dict(),
            "rows": [asdict(row) for row in rows],
        }
        path = out_dir / f"{base}.json"
        path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
        paths["json"] = str(path)
    return paths
