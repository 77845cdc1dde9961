"""Command-line front end.

Subcommands: shapley (emit a phi file), select (one method at one budget),
experiment (full sweep from a config file), communities (partition file),
evaluate (spread of a stored seed set). Every randomized step takes an
explicit seed. Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .community import PartitionError, CommunityPartition, detect_communities
from .experiment import (ConfigError, ExperimentConfig, StageError, derived_seed,
                         emit_results, load_seeds, run_experiment,
                         _STREAM_TRIVALENCY)
from .graph import (CostFileError, EdgeListError, ProbabilityScheme, SchemeError,
                    assign_costs, assign_probabilities, load_edge_list)
from .mia import build_miia_cache, sigma
from .selection import select_baseline, select_bimgt, select_bimgtc
from .shapley import (BimGame, SamplingPlan, aggregate_range, estimate_shapley,
                      load_shapley, save_shapley)

_VALIDATION_ERRORS = (ConfigError, EdgeListError, CostFileError, SchemeError,
                      PartitionError, ValueError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are validation errors: exit 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_graph_args(p):
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--scheme", default="weighted_cascade",
                   help="uniform:<p> | trivalency[:seed] | weighted_cascade")
    p.add_argument("--theta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0, help="master seed")


def _add_cost_args(p):
    p.add_argument("--cost-interval", default="50,100", metavar="LO,HI")
    p.add_argument("--cost-file")
    p.add_argument("--cost-seed", type=int)


def _prepared_graph(args):
    graph = load_edge_list(args.graph, args.directed)
    scheme = ProbabilityScheme.parse(
        args.scheme, seed=derived_seed(args.seed, _STREAM_TRIVALENCY))
    return assign_probabilities(graph, scheme)


def _costs(args, graph):
    if args.cost_file:
        return assign_costs(graph, path=args.cost_file)
    lo, hi = (int(x) for x in args.cost_interval.split(","))
    cseed = args.cost_seed if args.cost_seed is not None else args.seed
    return assign_costs(graph, interval=(lo, hi), seed=cseed)


def _cmd_shapley(args):
    graph = _prepared_graph(args)
    cache = build_miia_cache(graph, args.theta)
    plan = SamplingPlan.from_error_bound(args.epsilon, args.delta,
                                         aggregate_range(graph),
                                         tau_cap=args.tau_cap,
                                         repetitions=args.repetitions)
    estimate = estimate_shapley(BimGame(cache), plan, args.seed, workers=args.workers)
    save_shapley(args.out, graph, estimate)
    print(f"wrote {args.out} (tau={plan.tau}, bound={plan.tau_bound})")
    return 0


def _cmd_select(args):
    graph = _prepared_graph(args)
    costs = _costs(args, graph)
    if args.method in ("BIMGT", "BIMGTC"):
        if not args.shapley_file:
            raise ConfigError(f"{args.method} needs --shapley-file")
        phi = load_shapley(args.shapley_file, graph)
        if args.method == "BIMGT":
            seeds = select_bimgt(graph, costs, args.budget, phi)
        else:
            partition = detect_communities(graph, args.community_seed)
            seeds = select_bimgtc(graph, costs, args.budget, phi, partition)
    else:
        seeds = select_baseline(graph, costs, args.budget, args.method, seed=args.seed)
    cache = build_miia_cache(graph, args.theta)
    seeds.spread = sigma(cache, seeds.nodes, graph)
    record = {
        "method": seeds.method, "budget": seeds.budget,
        "seeds": [graph.raw_ids[u] for u in seeds.nodes],
        "total_cost": seeds.total_cost, "spread": seeds.spread,
    }
    Path(args.out).write_text(json.dumps(record, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {args.out} (|S|={len(seeds.nodes)}, cost={seeds.total_cost}, "
          f"spread={seeds.spread:.3f})")
    return 0


def _cmd_experiment(args):
    config = ExperimentConfig.from_file(args.config)
    for key in ("seed", "out_dir", "tau_cap"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(config, key, val)
    rows, stage_ms = run_experiment(config)
    paths = emit_results(rows, config)
    payload = json.loads(Path(paths["json"]).read_text(encoding="utf-8"))
    payload["stage_ms"] = stage_ms
    Path(paths["json"]).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {paths['csv']} and {paths['json']} ({len(rows)} rows)")
    return 0


def _cmd_communities(args):
    graph = load_edge_list(args.graph, args.directed)
    partition = detect_communities(graph, args.seed)
    partition.save(args.out, graph)
    print(f"wrote {args.out} ({partition.size} communities, "
          f"modularity={partition.modularity:.5f})")
    return 0


def _cmd_evaluate(args):
    graph = _prepared_graph(args)
    cache = build_miia_cache(graph, args.theta)
    seeds = load_seeds(args.seeds_file, graph)
    spread = sigma(cache, seeds, graph)
    print(f"sigma={spread!r} seeds={len(seeds)}")
    return 0


def build_parser():
    parser = _Parser(prog="bimshap",
                     description="Budgeted influence maximization via Shapley values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shapley", help="estimate Shapley values, write identifier,phi")
    _add_graph_args(p)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--tau-cap", type=int)
    p.add_argument("--repetitions", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_shapley)

    p = sub.add_parser("select", help="select one seed set")
    _add_graph_args(p)
    _add_cost_args(p)
    p.add_argument("--method", required=True,
                   choices=["BIMGT", "BIMGTC", "MDH", "MCCH", "RAND"])
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--shapley-file")
    p.add_argument("--community-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_select)

    p = sub.add_parser("experiment", help="full sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--tau-cap", dest="tau_cap", type=int)
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("communities", help="detect communities, write identifier,community")
    p.add_argument("--graph", required=True)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_communities)

    p = sub.add_parser("evaluate", help="spread of a stored seed set")
    _add_graph_args(p)
    p.add_argument("--seeds-file", required=True)
    p.set_defaults(fn=_cmd_evaluate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
