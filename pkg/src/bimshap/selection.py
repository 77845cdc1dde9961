"""Budgeted seed selection: value-sorted scan with neighbor exclusion,
community-proportional allocation with leftover transfer, and the RAND /
MDH / MCCH baselines.

Every selector returns a SeedSet whose total cost provably fits the budget;
spreads are filled in later by whoever holds a diffusion cache.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BASELINES = ("RAND", "MDH", "MCCH")


@dataclass
class SeedSet:
    """Selected nodes with their cost, method tag, and evaluated spread."""

    nodes: list
    total_cost: int
    method: str
    budget: float
    spread: float | None = None

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("seed set contains duplicates")
        if self.total_cost > self.budget:
            raise ValueError(
                f"seed set cost {self.total_cost} exceeds budget {self.budget}")

    @property
    def remaining(self):
        return self.budget - self.total_cost


@dataclass
class BudgetAllocation:
    """Per-community budget shares, proportional to community Shapley mass."""

    shares: list
    total: float

    def __post_init__(self):
        if any(s < 0 for s in self.shares):
            raise ValueError("negative community budget share")


def _by_descending_value(values, nodes=None):
    idx = range(len(values)) if nodes is None else nodes
    return sorted(idx, key=lambda u: (-values[u], u))


def allocate_budgets(phi, partition, budget):
    """Split the budget across communities proportional to their summed
    Shapley values; all-zero totals fall back to community sizes."""
    sums = [float(sum(phi[u] for u in members)) for members in partition.communities]
    total = sum(sums)
    if total <= 0.0:
        n = sum(len(members) for members in partition.communities)
        shares = [budget * len(members) / n for members in partition.communities]
    else:
        shares = [budget * s / total for s in sums]
    return BudgetAllocation(shares, budget)


def select_bimgt(graph, costs, budget, phi):
    """Single scan over nodes by descending Shapley value; a pick disables
    its (out-)neighbors, and the scan keeps going so later cheap nodes can
    still fit the leftover budget."""
    eligible = bytearray([1]) * graph.n
    remaining = budget
    chosen = []
    spent = 0
    for u in _by_descending_value(phi):
        if not eligible[u]:
            continue
        c = costs.of(u)
        if c <= remaining:
            chosen.append(u)
            spent += c
            remaining -= c
            for v in graph.out_neighbors(u):
                eligible[v] = 0
    return SeedSet(chosen, spent, "BIMGT", budget)


def select_bimgtc(graph, costs, budget, phi, partition):
    """Community-proportional budgets, spent per community on its highest
    Shapley nodes (no neighbor exclusion); unspent budget flows to the
    largest community, which is processed last."""
    alloc = allocate_budgets(phi, partition, budget)
    kmax = partition.largest()
    order = sorted(range(partition.size),
                   key=lambda i: (-len(partition.communities[i]), i))
    order = [i for i in order if i != kmax] + [kmax]
    shares = list(alloc.shares)
    chosen = []
    spent = 0
    for i in order:
        remaining = shares[i]
        for u in _by_descending_value(phi, partition.communities[i]):
            c = costs.of(u)
            if c <= remaining:
                chosen.append(u)
                spent += c
                remaining -= c
        if i != kmax:
            shares[kmax] += remaining
        else:
            shares[kmax] = remaining
    seeds = SeedSet(chosen, spent, "BIMGTC", budget)
    seeds.unspent_kmax = shares[kmax]
    return seeds


def undirected_neighbor_sets(graph):
    """Neighbor sets of the undirected view (union of in/out arcs)."""
    nbrs = [set() for _ in range(graph.n)]
    for u in range(graph.n):
        for v in graph.out_neighbors(u):
            nbrs[u].add(v)
            nbrs[v].add(u)
    return nbrs


def clustering_coefficient(graph, u, _nbrs=None):
    """Local clustering coefficient on the undirected view:
    links among neighbors / possible links; 0 when degree <= 1."""
    nbrs = _nbrs if _nbrs is not None else undirected_neighbor_sets(graph)
    mine = nbrs[u]
    d = len(mine)
    if d <= 1:
        return 0.0
    links2 = sum(len(mine & nbrs[w]) for w in mine)  # each link counted twice
    return links2 / (d * (d - 1))


def clustering_coefficients(graph):
    nbrs = undirected_neighbor_sets(graph)
    return np.array([clustering_coefficient(graph, u, _nbrs=nbrs)
                     for u in range(graph.n)])


def select_baseline(graph, costs, budget, method, seed=0):
    """RAND draws uniformly among non-seeds until nothing affordable is left;
    MDH/MCCH make one descending pass over degree / clustering coefficient,
    taking every node that still fits."""
    if method not in BASELINES:
        raise ValueError(f"unknown baseline {method!r}; pick one of {BASELINES}")
    n = graph.n
    if method == "RAND":
        rng = np.random.default_rng(seed)
        pool = list(range(n))
        cost_sorted = sorted(range(n), key=lambda u: (costs.of(u), u))
        cheapest = 0
        selected = set()
        chosen = []
        spent = 0
        remaining = budget
        fails = 0
        while pool:
            while cheapest < n and cost_sorted[cheapest] in selected:
                cheapest += 1
            if cheapest >= n or costs.of(cost_sorted[cheapest]) > remaining:
                break  # nothing left is affordable
            k = int(rng.integers(0, len(pool)))
            u = pool[k]
            c = costs.of(u)
            if c <= remaining:
                pool[k] = pool[-1]
                pool.pop()
                selected.add(u)
                chosen.append(u)
                spent += c
                remaining -= c
                fails = 0
            else:
                fails += 1
                if fails >= n:
                    break
        return SeedSet(chosen, spent, "RAND", budget)

    if method == "MDH":
        metric = np.array([graph.degree(u) for u in range(n)], dtype=float)
    else:
        metric = clustering_coefficients(graph)
    chosen = []
    spent = 0
    remaining = budget
    for u in _by_descending_value(metric):
        c = costs.of(u)
        if c <= remaining:
            chosen.append(u)
            spent += c
            remaining -= c
    return SeedSet(chosen, spent, method, budget)
