"""Shared fixtures: tiny handmade graphs and the benchmark datasets.

Benchmark fixtures prefer real SNAP files when $BIMSHAP_DATA points at a
directory containing ca-HepTh.txt(.gz) / ca-CondMat.txt(.gz); otherwise they
fall back to the deterministic synthetic twins with matching node/edge
counts. Each fixture reports which source it used.
"""

from __future__ import annotations

import gzip
import os
import shutil
from dataclasses import dataclass
from pathlib import Path

import pytest

from bimshap.graph import Graph, ProbabilityScheme, assign_probabilities
from bimshap.synth import make_twin

_REAL_NAMES = {
    "hept": ("ca-HepTh.txt", "ca-HepTh.txt.gz", "CA-HepTh.txt", "CA-HepTh.txt.gz"),
    "cmp": ("ca-CondMat.txt", "ca-CondMat.txt.gz", "CA-CondMat.txt", "CA-CondMat.txt.gz"),
}


@dataclass
class Dataset:
    name: str
    path: str
    source: str  # "real" or "synthetic"


def _resolve_dataset(name, cache_dir):
    data_dir = os.environ.get("BIMSHAP_DATA")
    if data_dir:
        for fname in _REAL_NAMES[name]:
            candidate = Path(data_dir) / fname
            if candidate.exists():
                if candidate.suffix == ".gz":
                    plain = cache_dir / f"{name}_real.txt"
                    if not plain.exists():
                        with gzip.open(candidate, "rb") as src, open(plain, "wb") as dst:
                            shutil.copyfileobj(src, dst)
                    return Dataset(name, str(plain), "real")
                return Dataset(name, str(candidate), "real")
    twin = cache_dir / f"{name}_twin.txt"
    if not twin.exists():
        make_twin(name, twin)
    return Dataset(name, str(twin), "synthetic")


@pytest.fixture(scope="session")
def dataset_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("datasets")


@pytest.fixture(scope="session")
def hept_dataset(dataset_cache):
    ds = _resolve_dataset("hept", dataset_cache)
    print(f"\n[dataset] HEPT source: {ds.source} ({ds.path})")
    return ds


@pytest.fixture(scope="session")
def cmp_dataset(dataset_cache):
    ds = _resolve_dataset("cmp", dataset_cache)
    print(f"\n[dataset] CMP source: {ds.source} ({ds.path})")
    return ds


def graph_from_arcs(n, arcs, directed=True):
    """Graph from (u, v, p) triples."""
    edges = [(u, v) for u, v, _ in arcs]
    probs = [p for _, _, p in arcs]
    return Graph(n, edges, directed, probs=probs)


@pytest.fixture
def chain_graph():
    """a->b->c with probability 0.5 per arc."""
    return graph_from_arcs(3, [(0, 1, 0.5), (1, 2, 0.5)])


@pytest.fixture
def two_node_sure_arc():
    """a->b with probability 1.0."""
    return graph_from_arcs(2, [(0, 1, 1.0)])


def uniform(graph, p):
    return assign_probabilities(graph, ProbabilityScheme("uniform", p=p))
