"""Shapley values for the influence game: sampling bound, Monte-Carlo
estimator over random arrival orders, and an exact enumeration oracle.

The game's players are the nodes and a coalition's utility is its spread.
The estimator draws tau random permutations; within one permutation it adds
players left to right, updating every affected tree's activation state
incrementally, so a whole permutation costs about one pass over the cache
instead of n full spread evaluations.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .mia import MiiaCache, sigma


def marginal_gain_range(graph, u):
    """Closed range [0, c_u] of node u's possible marginal influence gain.

    c_u = deg(u)/2 + sum over neighbors w of 1/(deg(w) - 1); a neighbor of
    degree <= 1 contributes 1.0 (its influence is wholly attributable to u).
    Directed graphs use out-neighbors/out-degree for u and in-degree for w.
    """
    if not (0 <= u < graph.n):
        raise IndexError(f"node {u} out of range")
    nbrs = graph.out_neighbors(u)
    wdeg = graph.in_degree if graph.directed else graph.degree
    total = len(nbrs) / 2.0
    for w in nbrs:
        d = wdeg(w)
        total += 1.0 if d <= 1 else 1.0 / (d - 1)
    return (0.0, total)


def aggregate_range(graph):
    """Average of the per-node range upper bounds c_u."""
    if graph.n < 1:
        raise ValueError("aggregate range of an empty graph is undefined")
    return sum(marginal_gain_range(graph, u)[1] for u in range(graph.n)) / graph.n


def sample_bound(epsilon, delta, r):
    """Permutations needed for additive error epsilon with confidence 1-delta,
    given aggregated marginal-gain range r: ceil(ln(2/delta) r^2 / (2 eps^2)),
    at least 1."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0,1), got {delta}")
    if r < 0:
        raise ValueError(f"range must be non-negative, got {r}")
    return max(1, math.ceil(math.log(2.0 / delta) * r * r / (2.0 * epsilon * epsilon)))


@dataclass(frozen=True)
class SamplingPlan:
    """Estimation parameters: error bound, confidence, range, permutation
    count (bound, possibly capped), and repetitions per permutation."""

    epsilon: float
    delta: float
    r: float
    tau: int
    tau_bound: int
    tau_cap: int | None = None
    repetitions: int = 1

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.tau_cap is None and self.tau != self.tau_bound:
            raise ValueError("uncapped plan must use the sample bound")

    @classmethod
    def from_error_bound(cls, epsilon, delta, r, tau_cap=None, repetitions=1):
        bound = sample_bound(epsilon, delta, r)
        tau = bound if tau_cap is None else min(bound, int(tau_cap))
        return cls(epsilon, delta, r, tau, bound, tau_cap, repetitions)


@dataclass
class BimGame:
    """Cooperative game on the graph's nodes with spread as utility."""

    cache: MiiaCache

    @property
    def n(self):
        return self.cache.n

    def value(self, seeds):
        return sigma(self.cache, seeds)


@dataclass
class ShapleyEstimate:
    """Per-node estimated Shapley values plus what produced them."""

    phi: np.ndarray
    plan: SamplingPlan
    master_seed: int
    ranges: np.ndarray = field(default=None)

    def ranking(self):
        """Node indices by descending value, ties by index."""
        order = sorted(range(len(self.phi)), key=lambda u: (-self.phi[u], u))
        return order


def _permutation(n, master_seed, index):
    rng = np.random.default_rng([int(master_seed), int(index)])
    return rng.permutation(n)


def _sweep_gains(cache, perm):
    """Marginal gain of each player when added in permutation order.

    Maintains the activation probability of every (root, node) slot while the
    prefix grows: turning u into a seed lifts its slots to 1 and pushes the
    change up each tree, with survival products updated by factor exchange.
    zc counts exactly-zero factors so division stays safe.
    """
    slot_node = cache.slot_node
    slot_parent = cache.slot_parent
    slot_arcp = cache.slot_arcp
    entry = cache.entry_slots
    nslots = len(slot_node)
    ap = [0.0] * nslots
    prod = [1.0] * nslots
    zc = [0] * nslots
    isseed = bytearray(cache.n)
    gains = np.zeros(cache.n)
    total = 0.0
    for u in perm:
        u = int(u)
        before = total
        isseed[u] = 1
        for s in entry[u]:
            oldv = ap[s]
            if oldv == 1.0:
                continue
            ap[s] = 1.0
            newv = 1.0
            cur = s
            while True:
                par = slot_parent[cur]
                if par < 0:
                    total += newv - oldv
                    break
                p = slot_arcp[cur]
                fo = 1.0 - oldv * p
                fn = 1.0 - newv * p
                if fo == 0.0:
                    zc[par] -= 1
                else:
                    prod[par] /= fo
                if fn == 0.0:
                    zc[par] += 1
                else:
                    prod[par] *= fn
                if isseed[slot_node[par]]:
                    break
                po = ap[par]
                pn = 1.0 - prod[par] if zc[par] == 0 else 1.0
                if pn > 1.0:
                    pn = 1.0
                elif pn < 0.0:
                    pn = 0.0
                if pn == po:
                    break
                ap[par] = pn
                cur = par
                oldv = po
                newv = pn
        gains[u] = total - before
    return gains


def _estimate_one(args):
    cache, master_seed, index, repetitions = args
    perm = _permutation(cache.n, master_seed, index)
    acc = _sweep_gains(cache, perm)
    for _ in range(repetitions - 1):
        acc = acc + _sweep_gains(cache, perm)
    return acc / repetitions


_WORKER_CACHE = None


def _worker_init(cache):
    global _WORKER_CACHE
    _WORKER_CACHE = cache


def _worker_run(payload):
    master_seed, index, repetitions = payload
    return _estimate_one((_WORKER_CACHE, master_seed, index, repetitions))


def estimate_shapley(game, plan, master_seed, workers=1):
    """Monte-Carlo Shapley estimate over plan.tau random permutations.

    Permutation i draws its own RNG stream from (master_seed, i), and the
    per-permutation gain vectors are summed in index order, so results are
    identical for any worker count.
    """
    if plan.tau < 1:
        raise ValueError("plan.tau must be >= 1")
    cache = game.cache
    phi = np.zeros(cache.n)
    if workers <= 1:
        for i in range(plan.tau):
            phi += _estimate_one((cache, master_seed, i, plan.repetitions))
    else:
        payloads = [(master_seed, i, plan.repetitions) for i in range(plan.tau)]
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                                 initargs=(cache,)) as pool:
            for gains in pool.map(_worker_run, payloads, chunksize=8):
                phi += gains
    phi /= plan.tau
    if not np.isfinite(phi).all():
        raise ArithmeticError("non-finite Shapley estimate")
    ranges = np.array([marginal_gain_range(cache.graph, u)[1] for u in range(cache.n)])
    return ShapleyEstimate(phi=phi, plan=plan, master_seed=master_seed, ranges=ranges)


def exact_shapley(game, limit=10):
    """Exact Shapley values by full coalition enumeration (2^n utilities).

    Refuses graphs above `limit` nodes; the coalition-weighted sum equals the
    average over all n! arrival orders and satisfies sum(phi) = value(all).
    """
    n = game.n
    if n > limit:
        raise ValueError(f"exact Shapley limited to n <= {limit}, got n = {n}")
    values = np.empty(1 << n)
    for mask in range(1 << n):
        seeds = [u for u in range(n) if mask >> u & 1]
        values[mask] = game.value(seeds)
    fact = [math.factorial(k) for k in range(n + 1)]
    phi = np.zeros(n)
    for u in range(n):
        bit = 1 << u
        acc = 0.0
        rest = [w for w in range(n) if w != u]
        for sub in range(1 << (n - 1)):
            mask = 0
            size = 0
            for j, w in enumerate(rest):
                if sub >> j & 1:
                    mask |= 1 << w
                    size += 1
            weight = fact[size] * fact[n - size - 1] / fact[n]
            acc += weight * (values[mask | bit] - values[mask])
        phi[u] = acc
    return phi


def save_shapley(path, graph, estimate):
    """Write "identifier,phi" lines for reuse by selection and plotting."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# identifier,phi\n")
        for u in range(graph.n):
            fh.write(f"{graph.raw_ids[u]},{float(estimate.phi[u])!r}\n")


def load_shapley(path, graph):
    """Read a phi file back into an array aligned with graph indices."""
    phi = np.zeros(graph.n)
    covered = np.zeros(graph.n, dtype=bool)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            tok, _, val = s.partition(",")
            u = graph.id_of.get(tok.strip())
            if u is None:
                continue
            phi[u] = float(val)
            covered[u] = True
    if not covered.all():
        missing = graph.raw_ids[int(np.flatnonzero(~covered)[0])]
        raise ValueError(f"{path}: no Shapley value for node {missing}")
    return phi
