"""Shared numeric kernels: nonlinearities, losses, sparse matvec, Adam.

All functions are pure and deterministic; reductions run in fixed index
order via numpy so repeated runs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

EPS_CLAMP = 1e-7


def relu(v):
    return np.maximum(v, 0.0)


def sigmoid(v):
    """Logistic function, clamped strictly inside (0, 1)."""
    return np.clip(expit(v), EPS_CLAMP, 1.0 - EPS_CLAMP)


def bce(pred, target) -> float:
    """Mean binary cross-entropy with predictions clamped for log-safety."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    p = np.clip(pred, EPS_CLAMP, 1.0 - EPS_CLAMP)
    return float(np.mean(-target * np.log(p) - (1.0 - target) * np.log(1.0 - p)))


def spmv(a: sp.spmatrix, h: np.ndarray) -> np.ndarray:
    """Sparse-dense product A @ h with a shape guard."""
    if a.shape[1] != h.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} @ {h.shape}")
    return a @ h


def glorot_uniform(rng, shape, fan_in: int, fan_out: int) -> np.ndarray:
    """Bounded uniform init keeping sigmoids unsaturated at the start."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


@dataclass
class AdamState:
    """First/second moment accumulators and hyperparameters for Adam."""

    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    t: int = 0
    lr: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def init_adam(params: dict, lr: float = 1e-2, beta1: float = 0.9,
              beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    state = AdamState(lr=lr, beta1=beta1, beta2=beta2, eps=eps)
    for name, arr in params.items():
        state.m[name] = np.zeros_like(arr)
        state.v[name] = np.zeros_like(arr)
    return state


def adam_step(params: dict, grads: dict, state: AdamState):
    """One bias-corrected Adam update; mutates params and state in place."""
    state.t += 1
    t = state.t
    for name, g in grads.items():
        p = params[name]
        if g.shape != p.shape:
            raise ValueError(f"gradient shape mismatch for {name}: "
                             f"{g.shape} vs {p.shape}")
        m = state.m[name]
        v = state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        m_hat = m / (1.0 - state.beta1 ** t)
        v_hat = v / (1.0 - state.beta2 ** t)
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params, state
