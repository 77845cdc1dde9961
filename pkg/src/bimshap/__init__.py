"""Budgeted influence maximization: Shapley-value seed selection under the
maximum-influence-arborescence diffusion model."""

from .graph import (CostAssignment, Graph, ProbabilityScheme, assign_costs,
                    assign_probabilities, load_edge_list, write_edge_list)
from .mia import (MaxInfluencePath, MiiaCache, MiiaTree, activation_probability,
                  build_miia, build_miia_cache, max_influence_path, sigma)
from .shapley import (BimGame, SamplingPlan, ShapleyEstimate, aggregate_range,
                      estimate_shapley, exact_shapley, marginal_gain_range,
                      sample_bound)
from .community import CommunityPartition, detect_communities, modularity
from .selection import (SeedSet, BudgetAllocation, clustering_coefficient,
                        select_baseline, select_bimgt, select_bimgtc)
from .experiment import ExperimentConfig, ResultRow, emit_results, run_experiment

__version__ = "0.1.0"
