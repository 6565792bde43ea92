"""Monte Carlo independent-cascade simulator (the ground-truth teacher).

A cascade advances in discrete waves: each newly active node gets exactly
one chance to activate each out-neighbor, succeeding with the arc's
probability.  ``estimate_activation`` uses the equivalent live-edge view
(each arc independently live with its probability, activation =
reachability from seeds), vectorized over rollouts in fixed-size chunks so
results are deterministic per seed and independent of worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, CostBenefit

CHUNK = 8192


@dataclass
class ProfitEstimate:
    expected_benefit: float
    seed_cost: float
    profit: float
    std_error: float
    rollouts: int


def rollout(g: Graph, probs: np.ndarray, x: np.ndarray, rng) -> np.ndarray:
    """One wave-based cascade from hard seed mask x; returns the final mask."""
    y = np.asarray(x, dtype=bool).copy()
    frontier = np.flatnonzero(y)
    arcs = g.arcs
    while frontier.size:
        nxt = []
        for u in frontier:
            for k in g.out_arc_range(u):
                v = arcs[k, 1]
                if not y[v] and rng.random() < probs[k]:
                    y[v] = True
                    nxt.append(v)
        frontier = np.asarray(nxt, dtype=np.int64)
    return y


def sample_world(g: Graph, probs: np.ndarray, rng) -> np.ndarray:
    """Each directed arc independently live with its probability."""
    return rng.random(g.arc_count) < probs


def rollout_in_world(g: Graph, world: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Activation = reachability from seeds through live arcs."""
    y = np.asarray(x, dtype=bool).copy()
    frontier = list(np.flatnonzero(y))
    arcs = g.arcs
    while frontier:
        u = frontier.pop()
        for k in g.out_arc_range(u):
            v = arcs[k, 1]
            if world[k] and not y[v]:
                y[v] = True
                frontier.append(v)
    return y


def propagate_worlds(arcs: np.ndarray, live: np.ndarray, y: np.ndarray) -> None:
    """Close y (worlds x nodes, bool) under reachability through live arcs.

    In-place; sweeps the arc list until a full pass adds nothing.
    """
    if len(arcs) == 0:
        return
    src = arcs[:, 0]
    dst = arcs[:, 1]
    changed = True
    while changed:
        changed = False
        for k in range(len(arcs)):
            add = y[:, src[k]] & live[:, k] & ~y[:, dst[k]]
            if add.any():
                y[:, dst[k]] |= add
                changed = True


def _simulate_chunks(g: Graph, probs: np.ndarray, x: np.ndarray,
                     rollouts: int, rng_seed: int, benefit=None):
    """Accumulate per-node activation counts and per-rollout benefit moments."""
    x = np.asarray(x, dtype=bool)
    counts = np.zeros(g.node_count)
    ben_sum = 0.0
    ben_sumsq = 0.0
    done = 0
    chunk_idx = 0
    while done < rollouts:
        m = min(CHUNK, rollouts - done)
        rng = np.random.default_rng([int(rng_seed), chunk_idx])
        live = rng.random((m, g.arc_count)) < probs
        y = np.broadcast_to(x, (m, g.node_count)).copy()
        propagate_worlds(g.arcs, live, y)
        counts += y.sum(axis=0)
        if benefit is not None:
            ben = y @ benefit
            ben_sum += float(ben.sum())
            ben_sumsq += float((ben * ben).sum())
        done += m
        chunk_idx += 1
    return counts, ben_sum, ben_sumsq


def estimate_activation(g: Graph, probs: np.ndarray, x: np.ndarray,
                        rollouts: int, rng_seed: int = 0) -> np.ndarray:
    """Per-node activation frequency over ``rollouts`` independent cascades."""
    if rollouts < 1:
        raise ValueError("rollouts must be >= 1")
    counts, _, _ = _simulate_chunks(g, probs, x, rollouts, rng_seed)
    return counts / rollouts


def evaluate_profit(g: Graph, probs: np.ndarray, cb: CostBenefit,
                    x: np.ndarray, rollouts: int,
                    rng_seed: int = 0) -> ProfitEstimate:
    """Teacher estimate of profit (expected earned benefit minus seed cost)."""
    if rollouts < 1:
        raise ValueError("rollouts must be >= 1")
    x = np.asarray(x, dtype=bool)
    _, ben_sum, ben_sumsq = _simulate_chunks(
        g, probs, x, rollouts, rng_seed, benefit=cb.benefit)
    mean_ben = ben_sum / rollouts
    if rollouts > 1:
        var = max(0.0, (ben_sumsq - rollouts * mean_ben * mean_ben) / (rollouts - 1))
    else:
        var = 0.0
    seed_cost = float(cb.cost[x].sum())
    return ProfitEstimate(
        expected_benefit=mean_ben,
        seed_cost=seed_cost,
        profit=mean_ben - seed_cost,
        std_error=float(np.sqrt(var / rollouts)),
        rollouts=rollouts,
    )
