"""Deterministic generator for collaboration-style benchmark graphs.

The public collaboration datasets used for benchmarking cannot always be
shipped or fetched, so this builds stand-ins with the same node/edge counts:
power-law community sizes, preferential attachment inside communities, and a
controlled fraction of cross-community edges. A fixed seed reproduces the
file byte for byte.
"""

from __future__ import annotations

import numpy as np

# name -> (n, m, communities, intra_fraction, seed)
PROFILES = {
    "hept": (9877, 25998, 480, 0.82, 1018),
    "cmp": (23133, 93497, 760, 0.74, 2027),
}


def _community_sizes(rng, n, k, alpha=1.6, min_size=3):
    """k sizes summing to n, roughly Pareto-distributed."""
    w = (1.0 - rng.random(k)) ** (-1.0 / alpha)
    sizes = np.maximum(min_size, np.floor(w / w.sum() * n)).astype(int)
    diff = n - int(sizes.sum())
    order = np.argsort(-sizes)
    i = 0
    while diff != 0:
        j = int(order[i % k])
        if diff > 0:
            sizes[j] += 1
            diff -= 1
        elif sizes[j] > min_size:
            sizes[j] -= 1
            diff += 1
        i += 1
    return sizes


def _biased_pairs(rng, weights, count):
    """count index pairs drawn proportional to weights (with replacement)."""
    cum = np.cumsum(weights)
    draws = rng.random(2 * count) * cum[-1]
    idx = np.searchsorted(cum, draws)
    return idx[:count], idx[count:]


def collaboration_like(n, m, communities, intra_fraction, seed):
    """Undirected edge set (index pairs) with planted community structure.

    Every community gets a spanning path (so all n nodes appear) plus
    preferential-attachment edges; the remaining budget becomes
    cross-community edges with degree-biased endpoints. Exactly m edges.
    """
    rng = np.random.default_rng(seed)
    sizes = _community_sizes(rng, n, communities)
    members = []
    start = 0
    for s in sizes:
        members.append(np.arange(start, start + int(s)))
        start += int(s)

    edges = set()
    degree = np.zeros(n, dtype=np.int64)

    def add(a, b):
        if a == b:
            return False
        key = (a, b) if a < b else (b, a)
        if key in edges:
            return False
        edges.add(key)
        degree[a] += 1
        degree[b] += 1
        return True

    # intra-community edges, superlinear in community size
    intra_total = int(round(m * intra_fraction))
    weights = sizes.astype(float) ** 1.25
    quota = np.floor(weights / weights.sum() * intra_total).astype(int)
    for i, mem in enumerate(members):
        s = len(mem)
        cap = s * (s - 1) // 2
        want = min(cap, max(s - 1, int(quota[i])))
        path = mem[rng.permutation(s)]
        have = 0
        for a, b in zip(path, path[1:]):
            have += add(int(a), int(b))
        rounds = 0
        while have < want and rounds < 40:
            batch = max(16, want - have)
            ai, bi = _biased_pairs(rng, degree[mem] + 1.0, batch)
            for a, b in zip(mem[ai], mem[bi]):
                if have >= want:
                    break
                have += add(int(a), int(b))
            rounds += 1

    # cross-community edges fill up to exactly m
    comm_of = np.empty(n, dtype=np.int64)
    for i, mem in enumerate(members):
        comm_of[mem] = i
    rounds = 0
    while len(edges) < m and rounds < 200:
        batch = max(64, m - len(edges))
        ai, bi = _biased_pairs(rng, degree + 1.0, batch)
        keep = comm_of[ai] != comm_of[bi]
        for a, b in zip(ai[keep], bi[keep]):
            if len(edges) >= m:
                break
            add(int(a), int(b))
        rounds += 1
    while len(edges) < m:  # uniform fallback, cannot stall
        a, b = rng.integers(0, n, size=2)
        add(int(a), int(b))
    return sorted(edges)


def write_snap_like(path, edges, n, title, rng_seed=0, both_directions=True):
    """Write edges in the SNAP text convention: comment header, tab-separated
    token pairs, one line per direction. Tokens are shuffled numeric ids so
    loading exercises the identifier mapping."""
    rng = np.random.default_rng(rng_seed)
    tokens = [str(int(t)) for t in rng.permutation(10 * n)[:n]]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {title}\n")
        fh.write(f"# Nodes: {n} Edges: {len(edges)}\n")
        fh.write("# FromNodeId\tToNodeId\n")
        for a, b in edges:
            fh.write(f"{tokens[a]}\t{tokens[b]}\n")
            if both_directions:
                fh.write(f"{tokens[b]}\t{tokens[a]}\n")


def make_twin(name, path):
    """Generate the named profile ("hept" or "cmp") at path."""
    n, m, k, intra, seed = PROFILES[name]
    edges = collaboration_like(n, m, k, intra, seed)
    write_snap_like(path, edges, n, f"synthetic twin of {name.upper()}", rng_seed=seed)
    return path
