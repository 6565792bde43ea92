"""Learned seed selection: latent ascent on penalized surrogate profit,
then greedy rounding to a budget-feasible hard set.

Ascent uses a fixed step size with halving on non-improving steps (up to
five halvings), so an accepted step never decreases the objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autoencoder, surrogate
from .graph import Graph, CostBenefit, normalized_operator
from .trainer import Checkpoint

MAX_HALVINGS = 5


@dataclass
class InferenceConfig:
    mu: float | None = None       # None -> 10 * max benefit / min cost
    ascent_steps: int = 200
    step_size: float = 0.05
    restarts: int = 8
    candidate_cap: int | None = None


def default_mu(b: np.ndarray, c: np.ndarray) -> float:
    return 10.0 * float(b.max()) / float(c.min())


def penalized_objective(z, theta, phi, a_hat, b, c, budget, mu) -> float:
    """Surrogate profit of the decoded soft mask, hinge-penalized over budget."""
    x_soft = autoencoder.decode(phi, z)
    p, _ = surrogate.forward(theta, a_hat, x_soft)
    soft_cost = float(c @ x_soft)
    return float(b @ p) - soft_cost - mu * max(0.0, soft_cost - budget)


def objective_and_grad(z, theta, phi, a_hat, b, c, budget, mu):
    """Objective value plus its gradient with respect to z."""
    x_soft = autoencoder.decode(phi, z)
    p, _ = surrogate.forward(theta, a_hat, x_soft)
    soft_cost = float(c @ x_soft)
    val = float(b @ p) - soft_cost - mu * max(0.0, soft_cost - budget)
    # Hinge subgradient at the budget boundary is taken as 0.
    pen = mu if soft_cost > budget else 0.0
    dx = surrogate.input_gradient(theta, a_hat, x_soft, b) - c - pen * c
    return val, autoencoder.decode_grad_z(phi, z, dx)


def latent_ascent(theta, phi, a_hat, b, c, budget, cfg: InferenceConfig,
                  rng_seed: int = 0):
    """Best soft mask over several random restarts of backtracking ascent."""
    mu = cfg.mu if cfg.mu is not None else default_mu(b, c)
    best_val = -np.inf
    best_z = None
    for r in range(cfg.restarts):
        rng = np.random.default_rng([int(rng_seed), r])
        z = rng.standard_normal(phi.latent_dim)
        val = penalized_objective(z, theta, phi, a_hat, b, c, budget, mu)
        for _ in range(cfg.ascent_steps):
            cur, grad = objective_and_grad(z, theta, phi, a_hat, b, c, budget, mu)
            step = cfg.step_size
            accepted = False
            for _ in range(MAX_HALVINGS + 1):
                cand = z + step * grad
                cand_val = penalized_objective(cand, theta, phi, a_hat, b, c,
                                               budget, mu)
                if cand_val > cur:
                    z, val = cand, cand_val
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
        if val > best_val:
            best_val = val
            best_z = z
    return autoencoder.decode(phi, best_z), float(best_val)


def greedy_round(x_soft, theta, a_hat, b, c, budget,
                 candidate_cap: int | None = None) -> np.ndarray:
    """Harden a soft mask: scan candidates by descending score and keep each
    affordable node whose surrogate marginal profit is positive."""
    x_soft = np.asarray(x_soft, dtype=float)
    n = len(x_soft)
    order = np.lexsort((np.arange(n), -x_soft))
    if candidate_cap is not None:
        order = order[:candidate_cap]
    mask = np.zeros(n, dtype=np.uint8)
    p, _ = surrogate.forward(theta, a_hat, mask)
    cur_profit = float(b @ p)
    spent = 0.0
    for i in order:
        if spent + c[i] > budget:
            continue
        mask[i] = 1
        p, _ = surrogate.forward(theta, a_hat, mask)
        trial = float(b @ p) - (spent + c[i])
        if trial > cur_profit:
            spent += c[i]
            cur_profit = trial
        else:
            mask[i] = 0
    return mask


def select_seeds(g: Graph, probs, cb: CostBenefit, budget: float,
                 ckpt: Checkpoint, cfg: InferenceConfig,
                 rng_seed: int = 0):
    """End-to-end selection from a trained checkpoint.

    Returns (hard mask, diagnostics).  ``probs`` is unused here (selection
    is surrogate-driven) but kept so all selectors share one signature.
    """
    if ckpt.node_count != g.node_count:
        raise ValueError(f"checkpoint trained on {ckpt.node_count} nodes, "
                         f"graph has {g.node_count}")
    a_hat = normalized_operator(g)
    b, c = cb.benefit, cb.cost
    x_soft, soft_obj = latent_ascent(ckpt.theta, ckpt.phi, a_hat, b, c,
                                     budget, cfg, rng_seed=rng_seed)
    mask = greedy_round(x_soft, ckpt.theta, a_hat, b, c, budget,
                        candidate_cap=cfg.candidate_cap)
    p, _ = surrogate.forward(ckpt.theta, a_hat, mask)
    cost_used = float(c[mask.astype(bool)].sum())
    diagnostics = {
        "soft_objective": soft_obj,
        "surrogate_profit": float(b @ p) - cost_used,
        "seed_count": int(mask.sum()),
        "cost_used": cost_used,
    }
    return mask, diagnostics
