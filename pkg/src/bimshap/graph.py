"""Graph loading, influence-probability schemes, and node selection costs.

Graphs are immutable after construction. Undirected input is stored as two
directed arcs per edge so the diffusion engine only ever sees arcs. Node
identifiers from files are arbitrary string tokens mapped to dense indices
0..n-1 in order of first appearance; the raw tokens are kept for reporting.
"""

from __future__ import annotations

import hashlib
import math
from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

TRIVALENCY_VALUES = (0.1, 0.01, 0.001)


class EdgeListError(ValueError):
    """Malformed or unreadable edge-list input."""


class CostFileError(ValueError):
    """Cost file missing a node or carrying a non-positive cost."""


class SchemeError(ValueError):
    """Invalid probability-scheme specification."""


class Graph:
    """Directed or undirected graph with one influence probability per arc.

    For undirected graphs the adjacency is symmetric by construction; `m`
    counts undirected edges there and directed arcs otherwise. Probabilities
    default to 1.0 until a scheme is assigned.
    """

    def __init__(self, n, edges, directed, raw_ids=None, probs=None):
        """Build from deduplicated index edges.

        edges: list of (u, v) pairs, self-loop free. For undirected graphs
        each edge appears once (either orientation); the mirror arc is added
        here. probs, when given, runs parallel to edges.
        """
        self.n = n
        self.directed = bool(directed)
        self.raw_ids = list(raw_ids) if raw_ids is not None else [str(i) for i in range(n)]
        if len(self.raw_ids) != n:
            raise ValueError("raw_ids length does not match n")
        self.id_of = {tok: i for i, tok in enumerate(self.raw_ids)}
        if len(self.id_of) != n:
            raise ValueError("raw identifiers are not unique")

        out = [[] for _ in range(n)]
        inc = [[] for _ in range(n)]
        seen = set()
        for k, (u, v) in enumerate(edges):
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside 0..{n - 1}")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add(key)
            p = 1.0 if probs is None else float(probs[k])
            if not (0.0 < p <= 1.0):
                raise ValueError(f"probability {p} of edge ({u},{v}) outside (0,1]")
            out[u].append((v, p))
            inc[v].append((u, p))
            if not self.directed:
                out[v].append((u, p))
                inc[u].append((v, p))
        self.m = len(seen)
        for lst in out:
            lst.sort()
        for lst in inc:
            lst.sort()
        self._out_nbr = [[v for v, _ in lst] for lst in out]
        self._out_p = [[p for _, p in lst] for lst in out]
        self._in_nbr = [[v for v, _ in lst] for lst in inc]
        self._in_p = [[p for _, p in lst] for lst in inc]
        self.d_max = max((len(lst) for lst in self._out_nbr), default=0)
        self._fingerprint = None

    # -- topology access -------------------------------------------------

    def out_neighbors(self, u):
        return self._out_nbr[u]

    def out_probs(self, u):
        return self._out_p[u]

    def in_neighbors(self, u):
        return self._in_nbr[u]

    def in_probs(self, u):
        return self._in_p[u]

    def out_degree(self, u):
        return len(self._out_nbr[u])

    def in_degree(self, u):
        return len(self._in_nbr[u])

    def degree(self, u):
        """Out-degree; equals the plain degree on undirected graphs."""
        return len(self._out_nbr[u])

    def edge_prob(self, u, v):
        """Probability of arc (u, v); 0.0 when the arc is absent."""
        nbrs = self._out_nbr[u]
        i = bisect_left(nbrs, v)
        if i < len(nbrs) and nbrs[i] == v:
            return self._out_p[u][i]
        return 0.0

    def arcs(self):
        """All directed arcs (u, v, p) in canonical (u, v) order."""
        for u in range(self.n):
            for v, p in zip(self._out_nbr[u], self._out_p[u]):
                yield u, v, p

    def canonical_edges(self):
        """One entry per stored edge: arcs if directed, (u<v) pairs otherwise."""
        for u in range(self.n):
            for v, p in zip(self._out_nbr[u], self._out_p[u]):
                if self.directed or u < v:
                    yield u, v, p

    def fingerprint(self):
        """Stable content hash of topology + probabilities (hex digest)."""
        if self._fingerprint is None:
            h = hashlib.sha256()
            h.update(f"{self.n},{self.m},{int(self.directed)}".encode())
            for u, v, p in self.arcs():
                h.update(u.to_bytes(8, "little"))
                h.update(v.to_bytes(8, "little"))
                h.update(np.float64(p).tobytes())
            self._fingerprint = h.hexdigest()
        return self._fingerprint

    def with_arc_probs(self, prob_of_arc):
        """Copy of this graph with probabilities prob_of_arc(u, v) per arc."""
        g = Graph.__new__(Graph)
        g.n = self.n
        g.m = self.m
        g.directed = self.directed
        g.raw_ids = self.raw_ids
        g.id_of = self.id_of
        g._out_nbr = self._out_nbr
        g._in_nbr = self._in_nbr
        g._out_p = [[_checked(prob_of_arc(u, v), u, v) for v in self._out_nbr[u]]
                    for u in range(self.n)]
        g._in_p = [[g._out_p[v][bisect_left(self._out_nbr[v], u)] for v in self._in_nbr[u]]
                   for u in range(self.n)]
        g.d_max = self.d_max
        g._fingerprint = None
        return g


def _checked(p, u, v):
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise ValueError(f"probability {p} of arc ({u},{v}) outside (0,1]")
    return p


def load_edge_list(path, directed=False):
    """Parse a SNAP-convention edge list into a Graph.

    One edge per line as two whitespace-separated tokens; '#' lines are
    comments. Duplicate edges collapse, self-loops are dropped (their
    identifiers still count toward n). Undirected input may list an edge in
    both orientations.
    """
    raw_ids = []
    id_of = {}
    edges = []
    seen = set()
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise EdgeListError(f"cannot read edge list {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            toks = s.split()
            if len(toks) != 2:
                raise EdgeListError(
                    f"{path}: line {lineno}: expected two tokens, found {len(toks)}")
            idx = []
            for tok in toks:
                i = id_of.get(tok)
                if i is None:
                    i = len(raw_ids)
                    id_of[tok] = i
                    raw_ids.append(tok)
                idx.append(i)
            u, v = idx
            if u == v:
                continue
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                edges.append((u, v))
    return Graph(len(raw_ids), edges, directed, raw_ids=raw_ids)


def write_edge_list(graph, path):
    """Write the graph back out in the same edge-list format (one line per
    stored edge, raw identifiers). Isolated nodes become self-loop lines,
    which load back as bare identifiers, so round-trips preserve n."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# nodes {graph.n} edges {graph.m} directed {int(graph.directed)}\n")
        for u, v, _ in graph.canonical_edges():
            fh.write(f"{graph.raw_ids[u]}\t{graph.raw_ids[v]}\n")
        for u in range(graph.n):
            if not graph._out_nbr[u] and not graph._in_nbr[u]:
                fh.write(f"{graph.raw_ids[u]}\t{graph.raw_ids[u]}\n")


@dataclass(frozen=True)
class ProbabilityScheme:
    """Edge-probability assignment rule.

    kind: "uniform" (constant p), "trivalency" (seeded draws from
    {0.1, 0.01, 0.001}), or "weighted_cascade" (reciprocal of the target's
    degree; in-degree on directed graphs).
    """

    kind: str
    p: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind == "uniform":
            if self.p is None or not (0.0 < self.p <= 1.0):
                raise SchemeError(f"uniform scheme needs p in (0,1], got {self.p}")
        elif self.kind == "trivalency":
            if self.seed is None:
                raise SchemeError("trivalency scheme needs an RNG seed")
        elif self.kind != "weighted_cascade":
            raise SchemeError(f"unknown probability scheme {self.kind!r}")

    @classmethod
    def parse(cls, spec, seed=None):
        """Parse "uniform:0.1" / "trivalency" / "weighted_cascade" (alias "wc")."""
        name, _, arg = spec.partition(":")
        name = name.strip().lower()
        if name == "uniform":
            try:
                return cls("uniform", p=float(arg))
            except ValueError as exc:
                raise SchemeError(f"bad uniform parameter {arg!r}") from exc
        if name == "trivalency":
            s = int(arg) if arg else seed
            if s is None:
                raise SchemeError("trivalency needs a seed (trivalency:<seed>)")
            return cls("trivalency", seed=s)
        if name in ("weighted_cascade", "wc"):
            return cls("weighted_cascade")
        raise SchemeError(f"unknown probability scheme {spec!r}")

    def label(self):
        if self.kind == "uniform":
            return f"uniform:{self.p:g}"
        return self.kind


def assign_probabilities(graph, scheme):
    """Return a copy of the graph with probabilities set per the scheme.

    Weighted cascade gives arc (u, v) probability 1/deg(v) (1/indeg(v) on
    directed graphs). Trivalency draws once per undirected edge so the two
    mirror arcs agree; on directed graphs it draws per arc.
    """
    if scheme.kind == "uniform":
        p = scheme.p
        return graph.with_arc_probs(lambda u, v: p)
    if scheme.kind == "weighted_cascade":
        deg = graph.in_degree if graph.directed else graph.degree
        return graph.with_arc_probs(lambda u, v: 1.0 / deg(v))
    # trivalency: one deterministic draw per canonical edge
    rng = np.random.default_rng(scheme.seed)
    keys = [(u, v) for u, v, _ in graph.canonical_edges()]
    draws = rng.choice(TRIVALENCY_VALUES, size=len(keys))
    table = {k: float(p) for k, p in zip(keys, draws)}
    if graph.directed:
        return graph.with_arc_probs(lambda u, v: table[(u, v)])
    return graph.with_arc_probs(lambda u, v: table[(min(u, v), max(u, v))])


@dataclass
class CostAssignment:
    """Positive integer selection cost per node."""

    costs: np.ndarray
    provenance: str

    def __post_init__(self):
        self.costs = np.asarray(self.costs, dtype=np.int64)
        if self.costs.size and int(self.costs.min()) < 1:
            raise ValueError("all costs must be positive integers")

    def of(self, u):
        return int(self.costs[u])

    def total(self, nodes):
        return int(sum(int(self.costs[u]) for u in nodes))


def assign_costs(graph, interval=None, seed=None, path=None):
    """Draw node costs uniformly from an integer interval, or load them.

    Exactly one of interval/path must be given. Interval draws are
    deterministic for a fixed seed. Cost files hold "identifier,cost" lines
    ('#' comments allowed) and must cover every node with a positive integer.
    """
    if (interval is None) == (path is None):
        raise ValueError("give exactly one of interval or path")
    if interval is not None:
        lo, hi = int(interval[0]), int(interval[1])
        if lo < 1 or hi < lo:
            raise ValueError(f"bad cost interval [{lo},{hi}]")
        rng = np.random.default_rng(seed)
        costs = rng.integers(lo, hi, size=graph.n, endpoint=True)
        return CostAssignment(costs, f"interval:[{lo},{hi}]:seed={seed}")

    costs = np.zeros(graph.n, dtype=np.int64)
    covered = np.zeros(graph.n, dtype=bool)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = [t.strip() for t in s.split(",")]
            if len(parts) != 2:
                raise CostFileError(f"{path}: line {lineno}: expected 'identifier,cost'")
            tok, val = parts
            u = graph.id_of.get(tok)
            if u is None:
                continue  # costs for nodes outside this graph are tolerated
            try:
                c = int(val)
            except ValueError as exc:
                raise CostFileError(
                    f"{path}: line {lineno}: non-integer cost {val!r} for node {tok}") from exc
            if c < 1:
                raise CostFileError(f"{path}: non-positive cost {c} for node {tok}")
            costs[u] = c
            covered[u] = True
    if not covered.all():
        missing = graph.raw_ids[int(np.flatnonzero(~covered)[0])]
        raise CostFileError(f"{path}: no cost for node {missing}")
    return CostAssignment(costs, f"file:{path}")
