"""Maximum-influence paths, per-root in-arborescences, and the spread function.

A path's propagation probability is the product of its arc probabilities.
Each node v gets an in-arborescence collecting the best path from every
source whose probability clears the threshold theta; influence of a seed set
is the sum over roots of the activation probability computed bottom-up over
that root's tree. Max-path search runs in the log domain (-ln p arc weights)
so long low-probability paths cannot underflow, while threshold tests and
reported probabilities use the plain left-to-right product along the path.
Ties between equal-weight paths resolve to the lexicographically smallest
node sequence, which makes the union of best paths a well-defined tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappush, heappop

_INF = float("inf")
_LOG_SLACK = 1e-9  # widens the Dijkstra radius; the product test decides


class StaleCacheError(RuntimeError):
    """MiiaCache used with a graph it was not built from."""


@dataclass(frozen=True)
class MaxInfluencePath:
    """Best path between two nodes: node sequence and its probability.

    probability 0.0 with an empty sequence encodes "no path"; a single-node
    sequence has probability 1.0 (empty product).
    """

    nodes: tuple
    probability: float


class MiiaTree:
    """In-arborescence of best paths into `root` with probability >= theta.

    parent maps every non-root tree node to its next hop toward the root;
    arc_prob carries the probability of that arc; path_prob the full product
    down to the root (1.0 for the root itself). `order` lists tree nodes with
    every parent before its children.
    """

    def __init__(self, root, theta, parent, arc_prob, path_prob, order):
        self.root = root
        self.theta = theta
        self.parent = parent
        self.arc_prob = arc_prob
        self.path_prob = path_prob
        self.order = order

    def __contains__(self, u):
        return u in self.path_prob

    def __len__(self):
        return len(self.order)

    def nodes(self):
        return list(self.order)

    def dump(self):
        """Text listing (root, arcs, per-node path probability) for fixture diffs."""
        lines = [f"root {self.root} theta {self.theta!r}"]
        for u in sorted(self.order):
            if u == self.root:
                lines.append(f"node {u} path_prob {self.path_prob[u]!r}")
            else:
                lines.append(
                    f"node {u} -> {self.parent[u]} "
                    f"arc_prob {self.arc_prob[u]!r} path_prob {self.path_prob[u]!r}")
        return "\n".join(lines) + "\n"


def _reverse_dijkstra(graph, root, max_logdist=None):
    """Shortest -ln(p) distances from every source into `root`.

    Returns (order, pred, dist): settle order (root first, each node after
    its pred), next-hop-toward-root pointers, and log-domain distances.
    Equal-distance ties prefer the smaller predecessor, so pred chains are
    lexicographically smallest sequences.
    """
    n = graph.n
    dist = [_INF] * n
    pred = [-1] * n
    done = bytearray(n)
    order = []
    dist[root] = 0.0
    heap = [(0.0, root)]
    in_nbr = graph._in_nbr
    in_p = graph._in_p
    while heap:
        d, x = heappop(heap)
        if done[x] or d > dist[x]:
            continue
        done[x] = 1
        order.append(x)
        dx = dist[x]
        nbrs = in_nbr[x]
        probs = in_p[x]
        for i in range(len(nbrs)):
            u = nbrs[i]
            if done[u]:
                continue
            cand = dx - math.log(probs[i])
            if max_logdist is not None and cand > max_logdist:
                continue
            du = dist[u]
            if cand < du:
                dist[u] = cand
                pred[u] = x
                heappush(heap, (cand, u))
            elif cand == du and x < pred[u]:
                pred[u] = x
    return order, pred, dist


def _chain_product(u, root, pred, graph):
    """Left-to-right product of arc probabilities along u's pred chain."""
    prod = 1.0
    x = u
    while x != root:
        nxt = pred[x]
        prod *= graph.edge_prob(x, nxt)
        x = nxt
    return prod


def max_influence_path(graph, u, v):
    """Path from u to v maximizing the product of arc probabilities."""
    if not (0 <= u < graph.n and 0 <= v < graph.n):
        raise IndexError(f"node index out of range: ({u},{v})")
    if u == v:
        return MaxInfluencePath((u,), 1.0)
    _, pred, dist = _reverse_dijkstra(graph, v)
    if dist[u] == _INF:
        return MaxInfluencePath((), 0.0)
    seq = [u]
    x = u
    while x != v:
        x = pred[x]
        seq.append(x)
    prob = 1.0
    for a, b in zip(seq, seq[1:]):
        prob *= graph.edge_prob(a, b)
    return MaxInfluencePath(tuple(seq), prob)


def build_miia(graph, v, theta):
    """In-arborescence of all best paths into v with probability >= theta."""
    if not (0.0 < theta <= 1.0):
        raise ValueError(f"theta must lie in (0,1], got {theta}")
    order, pred, _ = _reverse_dijkstra(graph, v, max_logdist=-math.log(theta) + _LOG_SLACK)
    parent = {}
    arc_prob = {}
    path_prob = {v: 1.0}
    kept = [v]
    for u in order:
        if u == v:
            continue
        w = pred[u]
        if w not in path_prob:  # parent fell below theta, so must u
            continue
        prod = _chain_product(u, v, pred, graph)
        if prod >= theta:
            parent[u] = w
            arc_prob[u] = graph.edge_prob(u, w)
            path_prob[u] = prod
            kept.append(u)
    return MiiaTree(v, theta, parent, arc_prob, path_prob, kept)


def activation_probability(tree, seeds, u):
    """Probability that u activates given seeds, over this tree only.

    Seeds have probability 1; a non-seed leaf 0; otherwise one minus the
    product over tree children w of (1 - ap(w) * P(w -> u)).
    """
    if u not in tree:
        raise ValueError(f"node {u} is not in the tree rooted at {tree.root}")
    seedset = set(seeds)
    buf = {}
    ap = {}
    for x in reversed(tree.order):
        a = 1.0 if x in seedset else 1.0 - buf.get(x, 1.0)
        ap[x] = a
        par = tree.parent.get(x)
        if par is not None:
            buf[par] = buf.get(par, 1.0) * (1.0 - a * tree.arc_prob[x])
    return ap[u]


class MiiaCache:
    """Every node's in-arborescence for one (graph, theta), in flat arrays.

    Slots concatenate the trees in root order; within a tree, parents come
    before children (so a reversed scan is bottom-up). Per slot: the node it
    represents, the parent slot (-1 at roots), the probability of the arc to
    the parent, and the max-path probability to the root. entry_slots[u]
    lists every slot belonging to node u; roots_of[u] the matching roots.
    """

    def __init__(self, graph, theta):
        if not (0.0 < theta <= 1.0):
            raise ValueError(f"theta must lie in (0,1], got {theta}")
        self.theta = theta
        self.graph = graph
        self.n = graph.n
        self.graph_fingerprint = graph.fingerprint()

        tree_ptr = [0]
        slot_node = []
        slot_parent = []
        slot_arcp = []
        slot_pathp = []
        entry_slots = [[] for _ in range(graph.n)]
        roots_of = [[] for _ in range(graph.n)]
        maxd = -math.log(theta) + _LOG_SLACK
        for v in range(graph.n):
            order, pred, _ = _reverse_dijkstra(graph, v, max_logdist=maxd)
            local = {}
            for u in order:
                if u == v:
                    s = len(slot_node)
                    local[u] = s
                    slot_node.append(u)
                    slot_parent.append(-1)
                    slot_arcp.append(0.0)
                    slot_pathp.append(1.0)
                    entry_slots[u].append(s)
                    roots_of[u].append(v)
                    continue
                w = pred[u]
                ps = local.get(w)
                if ps is None:
                    continue
                prod = _chain_product(u, v, pred, graph)
                if prod < theta:
                    continue
                s = len(slot_node)
                local[u] = s
                slot_node.append(u)
                slot_parent.append(ps)
                slot_arcp.append(graph.edge_prob(u, w))
                slot_pathp.append(prod)
                entry_slots[u].append(s)
                roots_of[u].append(v)
            tree_ptr.append(len(slot_node))
        self.tree_ptr = tree_ptr
        self.slot_node = slot_node
        self.slot_parent = slot_parent
        self.slot_arcp = slot_arcp
        self.slot_pathp = slot_pathp
        self.entry_slots = entry_slots
        self.roots_of = roots_of

    @property
    def total_slots(self):
        return len(self.slot_node)

    def roots_containing(self, u):
        """Roots whose in-arborescence contains u (reverse index)."""
        return list(self.roots_of[u])

    def tree(self, v):
        """Materialize the MiiaTree rooted at v from the flat arrays."""
        lo, hi = self.tree_ptr[v], self.tree_ptr[v + 1]
        parent = {}
        arc_prob = {}
        path_prob = {}
        order = []
        for s in range(lo, hi):
            u = self.slot_node[s]
            order.append(u)
            path_prob[u] = self.slot_pathp[s]
            ps = self.slot_parent[s]
            if ps >= 0:
                parent[u] = self.slot_node[ps]
                arc_prob[u] = self.slot_arcp[s]
        return MiiaTree(v, self.theta, parent, arc_prob, path_prob, order)


def build_miia_cache(graph, theta):
    """One in-arborescence per node plus the reverse index; deterministic."""
    return MiiaCache(graph, theta)


def sigma(cache, seeds, graph=None):
    """Expected influence of a seed set: sum over roots of their activation
    probability. Passing the graph revalidates the cache against it."""
    if graph is not None and graph.fingerprint() != cache.graph_fingerprint:
        raise StaleCacheError("cache was built from a different graph")
    n = cache.n
    mask = bytearray(n)
    for u in seeds:
        if not (0 <= u < n):
            raise IndexError(f"seed {u} out of range")
        mask[u] = 1
    slot_node = cache.slot_node
    slot_parent = cache.slot_parent
    slot_arcp = cache.slot_arcp
    nslots = len(slot_node)
    buf = [1.0] * nslots
    total = 0.0
    for s in range(nslots - 1, -1, -1):
        a = 1.0 if mask[slot_node[s]] else 1.0 - buf[s]
        par = slot_parent[s]
        if par < 0:
            total += a
        else:
            buf[par] *= 1.0 - a * slot_arcp[s]
    return total
