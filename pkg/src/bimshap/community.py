"""Louvain community detection and Newman modularity.

Detection works on the undirected unit-weight view of the graph (direction
and influence probabilities are diffusion concerns, not topology ones).
Node visiting order is shuffled once per level from the given seed, so a
fixed seed reproduces the partition bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PartitionError(ValueError):
    """Partition does not cover the graph's nodes exactly once."""


@dataclass
class CommunityPartition:
    """Disjoint covering communities with their modularity score.

    assignment[u] is u's community index; communities[i] lists members in
    ascending node order. Community indices are dense, numbered by first
    appearance over node index.
    """

    assignment: list
    communities: list
    modularity: float

    @property
    def size(self):
        return len(self.communities)

    def largest(self):
        """Index of the biggest community; ties go to the smaller index."""
        best = 0
        for i in range(1, len(self.communities)):
            if len(self.communities[i]) > len(self.communities[best]):
                best = i
        return best

    @classmethod
    def from_assignment(cls, graph, assignment):
        assignment = _dense_relabel(graph.n, assignment)
        ncomm = max(assignment) + 1 if assignment else 0
        communities = [[] for _ in range(ncomm)]
        for u, c in enumerate(assignment):
            communities[c].append(u)
        q = modularity(graph, assignment)
        return cls(assignment, communities, q)

    def save(self, path, graph):
        """Write "identifier,community" lines."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# identifier,community\n")
            for u in range(graph.n):
                fh.write(f"{graph.raw_ids[u]},{self.assignment[u]}\n")


def _dense_relabel(n, assignment):
    if len(assignment) != n:
        raise PartitionError(f"assignment covers {len(assignment)} of {n} nodes")
    relabel = {}
    out = []
    for c in assignment:
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return out


def _undirected_view(graph):
    """Unit-weight symmetric adjacency (neighbor sets) and edge count."""
    nbrs = [set() for _ in range(graph.n)]
    for u in range(graph.n):
        for v in graph.out_neighbors(u):
            if u != v:
                nbrs[u].add(v)
                nbrs[v].add(u)
    m = sum(len(s) for s in nbrs) // 2
    return nbrs, m


def modularity(graph, partition):
    """Newman modularity of a partition on the undirected unit-weight view.

    Q = sum_C [ L_C/m - (D_C/2m)^2 ] with L_C internal edges and D_C total
    degree of community C; an edgeless graph scores 0.
    """
    assignment = partition.assignment if isinstance(partition, CommunityPartition) else partition
    assignment = _dense_relabel(graph.n, assignment)
    nbrs, m = _undirected_view(graph)
    if m == 0:
        return 0.0
    ncomm = max(assignment) + 1
    internal = [0] * ncomm
    degsum = [0] * ncomm
    for u in range(graph.n):
        c = assignment[u]
        degsum[c] += len(nbrs[u])
        for v in nbrs[u]:
            if v > u and assignment[v] == c:
                internal[c] += 1
    two_m = 2.0 * m
    return sum(internal[c] / m - (degsum[c] / two_m) ** 2 for c in range(ncomm))


def detect_communities(graph, seed=0):
    """Louvain: local modularity-gain moves, then graph aggregation, repeated
    until a level yields no improvement. Deterministic per seed."""
    n = graph.n
    if n == 0:
        return CommunityPartition([], [], 0.0)
    nbrs, m = _undirected_view(graph)
    if m == 0:
        return CommunityPartition.from_assignment(graph, list(range(n)))

    # level graph state: weighted adjacency dicts + self weights
    adj = [{v: 1.0 for v in nbrs[u]} for u in range(n)]
    selfw = [0.0] * n
    node_members = [[u] for u in range(n)]  # original nodes inside each supernode
    assignment = [0] * n
    rng = np.random.default_rng(seed)
    total_w = float(m)
    level_q = []

    while True:
        ln = len(adj)
        deg = [2.0 * selfw[u] + sum(adj[u].values()) for u in range(ln)]
        comm = list(range(ln))
        comm_tot = deg[:]
        order = [int(x) for x in rng.permutation(ln)]
        improved = False
        moved = True
        while moved:
            moved = False
            for u in order:
                cu = comm[u]
                ku = deg[u]
                # weights from u toward each neighboring community
                w_to = {}
                for v, w in adj[u].items():
                    if v != u:
                        w_to[comm[v]] = w_to.get(comm[v], 0.0) + w
                comm_tot[cu] -= ku
                stay = w_to.get(cu, 0.0) - comm_tot[cu] * ku / (2.0 * total_w)
                best_c = cu
                best_gain = stay
                for c in sorted(w_to):
                    if c == cu:
                        continue
                    gain = w_to[c] - comm_tot[c] * ku / (2.0 * total_w)
                    if gain > best_gain + 1e-12:
                        best_gain = gain
                        best_c = c
                comm_tot[best_c] += ku
                if best_c != cu:
                    comm[u] = best_c
                    moved = True
                    improved = True

        # fold the level's communities into the running assignment
        relabel = {}
        for u in range(ln):
            c = comm[u]
            if c not in relabel:
                relabel[c] = len(relabel)
        for u in range(ln):
            for orig in node_members[u]:
                assignment[orig] = relabel[comm[u]]
        level_q.append(modularity(graph, _dense_relabel(n, assignment)))
        if not improved:
            break

        # aggregate: one supernode per community
        ncomm = len(relabel)
        new_adj = [dict() for _ in range(ncomm)]
        new_selfw = [0.0] * ncomm
        new_members = [[] for _ in range(ncomm)]
        for u in range(ln):
            cu = relabel[comm[u]]
            new_members[cu].extend(node_members[u])
            new_selfw[cu] += selfw[u]
            for v, w in adj[u].items():
                cv = relabel[comm[v]]
                if cu == cv:
                    if u < v:  # internal edge, count once
                        new_selfw[cu] += w
                else:
                    new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
        if ncomm == ln:
            break
        adj = new_adj
        selfw = new_selfw
        node_members = new_members

    part = CommunityPartition.from_assignment(graph, assignment)
    part.level_modularity = level_q
    return part
