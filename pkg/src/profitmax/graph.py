"""Graph loading, validation, and preprocessing.

Graphs are immutable after construction.  Diffusion walks directed arcs;
message passing and degree statistics always use the undirected, unweighted
collapse of the edge set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)


class GraphError(ValueError):
    """Raised for malformed edge lists or invalid graph parameters."""


@dataclass
class Graph:
    """Directed or undirected graph with dense 0-based node indices.

    ``edges`` holds the deduplicated input-orientation pairs (one row per
    undirected edge for undirected graphs).  ``arcs`` is the directed arc
    list actually used by diffusion: equal to ``edges`` for directed graphs,
    both orientations for undirected ones, sorted by (src, dst).
    """

    node_count: int
    edges: np.ndarray          # (E, 2) int64
    directed: bool
    id_map: np.ndarray         # original node id for each dense index
    arcs: np.ndarray           # (A, 2) int64, sorted by (src, dst)
    out_indptr: np.ndarray     # CSR pointers over arcs by source
    in_indptr: np.ndarray      # CSR pointers over arcs by destination
    in_arcidx: np.ndarray      # arc index per in-adjacency slot
    und_pairs: np.ndarray      # (M, 2) int64 with u < v, deduplicated
    und_neighbors: list = field(repr=False)  # list of sorted int arrays

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def out_arc_range(self, u: int) -> range:
        """Arc indices leaving node u."""
        return range(self.out_indptr[u], self.out_indptr[u + 1])

    def und_degrees(self) -> np.ndarray:
        return np.array([len(nbrs) for nbrs in self.und_neighbors], dtype=np.int64)


@dataclass
class CostBenefit:
    """Per-node selection cost and influence benefit."""

    cost: np.ndarray
    benefit: np.ndarray


def from_edges(pairs, directed: bool = True, num_nodes: int | None = None,
               id_map: np.ndarray | None = None) -> Graph:
    """Build a Graph from dense-indexed (u, v) pairs.

    Self-loops and duplicates are dropped (with a logged count).  For
    undirected graphs (u, v) and (v, u) are the same edge.
    """
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    n_raw = len(arr)
    arr = arr[arr[:, 0] != arr[:, 1]]
    n_loops = n_raw - len(arr)

    if directed:
        keyed = arr
    else:
        keyed = np.sort(arr, axis=1)
    if len(keyed):
        keyed = np.unique(keyed, axis=0)
    n_dupes = len(arr) - len(keyed)
    if n_loops or n_dupes:
        logger.info("dropped %d self-loops and %d duplicate edges", n_loops, n_dupes)
    if len(keyed) == 0:
        raise GraphError("empty edge set after self-loop and duplicate removal")

    max_idx = int(keyed.max())
    node_count = num_nodes if num_nodes is not None else max_idx + 1
    if max_idx >= node_count:
        raise GraphError(f"endpoint index {max_idx} >= node_count {node_count}")
    if id_map is None:
        id_map = np.arange(node_count, dtype=np.int64)

    edges = keyed
    if directed:
        arcs = edges.copy()
    else:
        arcs = np.vstack([edges, edges[:, ::-1]])
    order = np.lexsort((arcs[:, 1], arcs[:, 0]))
    arcs = arcs[order]

    out_indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.add.at(out_indptr, arcs[:, 0] + 1, 1)
    out_indptr = np.cumsum(out_indptr)

    in_order = np.lexsort((arcs[:, 0], arcs[:, 1]))
    in_arcidx = in_order.astype(np.int64)
    in_indptr = np.zeros(node_count + 1, dtype=np.int64)
    np.add.at(in_indptr, arcs[:, 1] + 1, 1)
    in_indptr = np.cumsum(in_indptr)

    und = np.unique(np.sort(arcs, axis=1), axis=0)
    und_neighbors = [[] for _ in range(node_count)]
    for u, v in und:
        und_neighbors[u].append(v)
        und_neighbors[v].append(u)
    und_neighbors = [np.array(sorted(nbrs), dtype=np.int64) for nbrs in und_neighbors]

    return Graph(node_count=node_count, edges=edges, directed=directed,
                 id_map=id_map, arcs=arcs, out_indptr=out_indptr,
                 in_indptr=in_indptr, in_arcidx=in_arcidx,
                 und_pairs=und, und_neighbors=und_neighbors)


def load_edge_list(path, directed: bool = True) -> Graph:
    """Load a SNAP-style edge list: one "u v" pair per line, '#' comments.

    Node ids are re-indexed densely to 0..|V|-1 in ascending original-id
    order; the mapping is kept on the returned Graph.
    """
    path = Path(path)
    if not path.exists():
        raise GraphError(f"edge list not found: {path}")
    raw = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected two fields, got {len(parts)}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise GraphError(f"{path}:{lineno}: non-integer endpoint") from exc
            raw.append((u, v))
    if not raw:
        raise GraphError(f"{path}: no edges found")
    raw = np.asarray(raw, dtype=np.int64)
    ids = np.unique(raw)
    dense = {orig: i for i, orig in enumerate(ids.tolist())}
    remapped = np.array([[dense[u], dense[v]] for u, v in raw], dtype=np.int64)
    return from_edges(remapped, directed=directed, num_nodes=len(ids), id_map=ids)


def normalized_operator(g: Graph) -> sp.csr_matrix:
    """Symmetrically normalized propagation operator on the undirected collapse.

    Returns D^{-1/2} (A + I) D^{-1/2} as CSR; symmetric with spectral
    norm at most 1.
    """
    n = g.node_count
    u, v = g.und_pairs[:, 0], g.und_pairs[:, 1]
    rows = np.concatenate([u, v, np.arange(n)])
    cols = np.concatenate([v, u, np.arange(n)])
    data = np.ones(len(rows))
    a_tilde = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    deg = np.asarray(a_tilde.sum(axis=1)).ravel()
    out = a_tilde.tocoo()
    # one sqrt of the degree product keeps simple entries like 0.5 exact
    out.data = out.data / np.sqrt(deg[out.row] * deg[out.col])
    return out.tocsr()


def assign_probabilities(g: Graph, model: str, rng_seed: int = 0,
                         p: float = 0.1) -> np.ndarray:
    """Per-arc transmission probabilities.

    ``model`` is "uniform" (every arc gets ``p``) or "trivalency" (each arc
    independently gets one of {0.1, 0.01, 0.001} with equal probability).
    """
    if model == "uniform":
        if not (0.0 < p <= 1.0):
            raise ValueError(f"uniform probability must be in (0, 1], got {p}")
        return np.full(g.arc_count, float(p))
    if model == "trivalency":
        rng = np.random.default_rng(rng_seed)
        choices = np.array([0.1, 0.01, 0.001])
        return choices[rng.integers(0, 3, size=g.arc_count)]
    raise ValueError(f"unknown probability model: {model!r}")


def assign_cost_benefit(g: Graph, cost_range=(50.0, 100.0),
                        benefit_range=(800.0, 1000.0),
                        rng_seed: int = 0) -> CostBenefit:
    """Draw per-node costs and benefits uniformly from the given intervals."""
    for name, (lo, hi) in (("cost", cost_range), ("benefit", benefit_range)):
        if lo <= 0 or hi < lo:
            raise ValueError(f"invalid {name} range [{lo}, {hi}]")
    rng = np.random.default_rng(rng_seed)
    cost = rng.uniform(cost_range[0], cost_range[1], size=g.node_count)
    benefit = rng.uniform(benefit_range[0], benefit_range[1], size=g.node_count)
    return CostBenefit(cost=cost, benefit=benefit)


def graph_stats(g: Graph) -> dict:
    """Node/edge counts plus degree statistics on the undirected collapse."""
    degs = g.und_degrees()
    return {
        "nodes": g.node_count,
        "edges": len(g.edges),
        "max_degree": int(degs.max()) if len(degs) else 0,
        "avg_degree": 2.0 * len(g.und_pairs) / g.node_count,
    }
