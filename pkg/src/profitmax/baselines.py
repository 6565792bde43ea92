"""Classical budget-constrained seed-selection baselines.

Greedy variants estimate marginal profit by Monte Carlo: each selection
round samples a fresh fixed set of live-edge worlds (common random
numbers), so all candidates in a round face identical randomness.
Heuristic variants rank nodes by degree-style scores on the undirected
collapse and fill the budget, skipping unaffordable nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffusion import propagate_worlds
from .graph import Graph, CostBenefit


@dataclass
class BaselineConfig:
    gain_rollouts: int = 200
    sample_fraction: float = 0.1


def degree_discount_value(d: float, t: float, p: float) -> float:
    """Discounted degree of a node with d neighbors, t of them seeds."""
    return d - 2 * t - (d - t) * t * p


def _fill_affordable(order, cost, budget) -> np.ndarray:
    n = len(cost)
    mask = np.zeros(n, dtype=np.uint8)
    spent = 0.0
    for i in order:
        if spent + cost[i] <= budget:
            mask[i] = 1
            spent += cost[i]
    return mask


def high_degree(g: Graph, cb: CostBenefit, budget: float) -> np.ndarray:
    degs = g.und_degrees()
    order = np.lexsort((np.arange(g.node_count), -degs))
    return _fill_affordable(order, cb.cost, budget)


def single_discount(g: Graph, cb: CostBenefit, budget: float) -> np.ndarray:
    degs = g.und_degrees().astype(float)
    mask = np.zeros(g.node_count, dtype=np.uint8)
    spent = 0.0
    while True:
        best = -1
        for i in range(g.node_count):
            if mask[i] or spent + cb.cost[i] > budget:
                continue
            if best < 0 or degs[i] > degs[best]:
                best = i
        if best < 0:
            break
        mask[best] = 1
        spent += cb.cost[best]
        for v in g.und_neighbors[best]:
            degs[v] -= 1
    return mask


def degree_discount(g: Graph, cb: CostBenefit, budget: float,
                    p: float) -> np.ndarray:
    degs = g.und_degrees().astype(float)
    dd = degs.copy()
    t = np.zeros(g.node_count)
    mask = np.zeros(g.node_count, dtype=np.uint8)
    spent = 0.0
    while True:
        best = -1
        for i in range(g.node_count):
            if mask[i] or spent + cb.cost[i] > budget:
                continue
            if best < 0 or dd[i] > dd[best]:
                best = i
        if best < 0:
            break
        mask[best] = 1
        spent += cb.cost[best]
        for v in g.und_neighbors[best]:
            if not mask[v]:
                t[v] += 1
                dd[v] = degree_discount_value(degs[v], t[v], p)
    return mask


def clustering_coefficients(g: Graph) -> np.ndarray:
    """Local clustering coefficient per node on the undirected collapse."""
    nbr_sets = [set(nbrs.tolist()) for nbrs in g.und_neighbors]
    coeff = np.zeros(g.node_count)
    for u in range(g.node_count):
        nbrs = g.und_neighbors[u]
        d = len(nbrs)
        if d < 2:
            continue
        links = 0
        for i in range(d):
            si = nbr_sets[nbrs[i]]
            for j in range(i + 1, d):
                if nbrs[j] in si:
                    links += 1
        coeff[u] = 2.0 * links / (d * (d - 1))
    return coeff


def high_clustering(g: Graph, cb: CostBenefit, budget: float) -> np.ndarray:
    coeff = clustering_coefficients(g)
    degs = g.und_degrees()
    order = np.lexsort((np.arange(g.node_count), -degs, -coeff))
    return _fill_affordable(order, cb.cost, budget)


def random_selection(g: Graph, cb: CostBenefit, budget: float,
                     rng_seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(rng_seed)
    order = rng.permutation(g.node_count)
    return _fill_affordable(order, cb.cost, budget)


def _mean_benefit(g: Graph, live: np.ndarray, mask: np.ndarray,
                  benefit: np.ndarray) -> float:
    y = np.broadcast_to(mask.astype(bool), (len(live), g.node_count)).copy()
    propagate_worlds(g.arcs, live, y)
    return float((y @ benefit).mean())


def _marginal_benefits(g: Graph, live: np.ndarray, active: np.ndarray,
                       candidates, benefit: np.ndarray) -> dict:
    """Mean extra benefit of adding each candidate, against shared worlds.

    ``active`` is the (worlds x nodes) activation of the current seed set.
    """
    gains = {}
    for i in candidates:
        y = active.copy()
        y[:, i] = True
        propagate_worlds(g.arcs, live, y)
        gains[i] = float(((y & ~active) @ benefit).mean())
    return gains


def _greedy_core(g: Graph, probs, cb: CostBenefit, budget: float,
                 cfg: BaselineConfig, rng_seed: int,
                 fraction: float) -> np.ndarray:
    mask = np.zeros(g.node_count, dtype=np.uint8)
    spent = 0.0
    for round_idx in range(g.node_count):
        afford = np.flatnonzero((mask == 0) & (cb.cost <= budget - spent))
        if len(afford) == 0:
            break
        rng = np.random.default_rng([int(rng_seed), round_idx])
        live = rng.random((cfg.gain_rollouts, g.arc_count)) < probs
        subset_size = int(np.ceil(fraction * len(afford)))
        subset = rng.choice(afford, size=subset_size, replace=False)
        subset = np.sort(subset)
        active = np.broadcast_to(mask.astype(bool),
                                 (cfg.gain_rollouts, g.node_count)).copy()
        propagate_worlds(g.arcs, live, active)
        gains = _marginal_benefits(g, live, active, subset, cb.benefit)
        best, best_gain = -1, 0.0
        for i in subset:
            net = gains[i] - cb.cost[i]
            if net > best_gain:
                best, best_gain = i, net
        if best < 0:
            break
        mask[best] = 1
        spent += cb.cost[best]
    return mask


def simple_greedy(g: Graph, probs, cb: CostBenefit, budget: float,
                  cfg: BaselineConfig, rng_seed: int = 0) -> np.ndarray:
    return _greedy_core(g, probs, cb, budget, cfg, rng_seed, fraction=1.0)


def stochastic_greedy(g: Graph, probs, cb: CostBenefit, budget: float,
                      cfg: BaselineConfig, rng_seed: int = 0) -> np.ndarray:
    return _greedy_core(g, probs, cb, budget, cfg, rng_seed,
                        fraction=cfg.sample_fraction)


def double_greedy(g: Graph, probs, cb: CostBenefit, budget: float,
                  cfg: BaselineConfig, rng_seed: int = 0) -> np.ndarray:
    """Deterministic double-greedy scan plus a budget-repair pass.

    The scan itself ignores the budget (grow-from-empty vs shrink-from-full
    on estimated marginal profit); kept nodes are then dropped in ascending
    estimated-marginal order until the set is affordable.
    """
    rng = np.random.default_rng([int(rng_seed), 0])
    live = rng.random((cfg.gain_rollouts, g.arc_count)) < probs
    x_mask = np.zeros(g.node_count, dtype=np.uint8)
    y_mask = np.ones(g.node_count, dtype=np.uint8)
    est_marg = {}
    ben_x = _mean_benefit(g, live, x_mask, cb.benefit)
    ben_y = _mean_benefit(g, live, y_mask, cb.benefit)
    for i in range(g.node_count):
        x_add = x_mask.copy()
        x_add[i] = 1
        ben_x_add = _mean_benefit(g, live, x_add, cb.benefit)
        gain_add = ben_x_add - ben_x - cb.cost[i]
        y_del = y_mask.copy()
        y_del[i] = 0
        ben_y_del = _mean_benefit(g, live, y_del, cb.benefit)
        gain_del = ben_y_del - ben_y + cb.cost[i]
        if gain_add >= gain_del:
            x_mask = x_add
            ben_x = ben_x_add
            est_marg[i] = gain_add
        else:
            y_mask = y_del
            ben_y = ben_y_del
    spent = float(cb.cost[x_mask.astype(bool)].sum())
    while spent > budget:
        kept = np.flatnonzero(x_mask)
        worst = min(kept, key=lambda i: (est_marg[i], i))
        x_mask[worst] = 0
        spent -= cb.cost[worst]
    return x_mask
