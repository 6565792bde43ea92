"""Two-layer GCN mapping a seed mask to per-node activation probabilities.

Layout: with X the |V| x 1 column form of the mask,
H1 = ReLU((A_hat X) W1) and p_hat = sigmoid((A_hat H1) W2), where W1 is
1 x H and W2 is H x 1.  Gradients are hand-derived reverse-mode; no
autodiff framework is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import bce, glorot_uniform, relu, sigmoid, spmv


@dataclass
class SurrogateParams:
    w1: np.ndarray  # (1, H)
    w2: np.ndarray  # (H, 1)

    @property
    def hidden_width(self) -> int:
        return self.w1.shape[1]

    def as_dict(self) -> dict:
        return {"w1": self.w1, "w2": self.w2}


def init_surrogate(hidden: int = 16, rng_seed: int = 0) -> SurrogateParams:
    rng = np.random.default_rng(rng_seed)
    w1 = glorot_uniform(rng, (1, hidden), 1, hidden)
    w2 = glorot_uniform(rng, (hidden, 1), hidden, 1)
    return SurrogateParams(w1=w1, w2=w2)


def forward(theta: SurrogateParams, a_hat, x: np.ndarray):
    """Predicted activation probabilities for one seed mask.

    Returns (p_hat, cache); the cache holds intermediates for backprop.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != a_hat.shape[0]:
        raise ValueError(f"mask shape {x.shape} incompatible with operator "
                         f"{a_hat.shape}")
    s1 = spmv(a_hat, x[:, None])          # (V, 1)
    z1 = s1 @ theta.w1                    # (V, H)
    h1 = relu(z1)
    s2 = spmv(a_hat, h1)                  # (V, H)
    z2 = s2 @ theta.w2                    # (V, 1)
    p = sigmoid(z2[:, 0])
    cache = {"s1": s1, "z1": z1, "s2": s2, "p": p}
    return p, cache


def _forward_batch(theta: SurrogateParams, a_hat, xs: np.ndarray):
    """Batched forward; xs is (T, V).  Returns p (T, V) and intermediates."""
    n = a_hat.shape[0]
    t = xs.shape[0]
    h = theta.hidden_width
    s1 = spmv(a_hat, xs.T.astype(float))              # (V, T)
    z1 = s1[:, :, None] * theta.w1[0]                 # (V, T, H)
    h1 = relu(z1)
    s2 = spmv(a_hat, h1.reshape(n, t * h)).reshape(n, t, h)
    z2 = s2 @ theta.w2[:, 0]                          # (V, T)
    p = sigmoid(z2)
    return p, s1, z1, s2


def loss_and_param_grads(theta: SurrogateParams, a_hat,
                         xs: np.ndarray, ys: np.ndarray):
    """Mean BCE over a batch of (mask, outcome) pairs plus dL/dW1, dL/dW2."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    if xs.shape != ys.shape:
        raise ValueError(f"batch shape mismatch: {xs.shape} vs {ys.shape}")
    if xs.shape[0] == 0:
        raise ValueError("empty batch")
    t, n = xs.shape
    p, s1, z1, s2 = _forward_batch(theta, a_hat, xs)
    loss = bce(p.T, ys)

    dz2 = (p - ys.T) / (t * n)                        # (V, T)
    dw2 = np.einsum("vth,vt->h", s2, dz2)[:, None]
    ds2 = dz2[:, :, None] * theta.w2[:, 0]            # (V, T, H)
    dh1 = spmv(a_hat, ds2.reshape(n, t * theta.hidden_width))
    dh1 = dh1.reshape(n, t, theta.hidden_width)
    dz1 = dh1 * (z1 > 0)
    dw1 = np.einsum("vt,vth->h", s1, dz1)[None, :]
    return loss, {"w1": dw1, "w2": dw2}


def input_gradient(theta: SurrogateParams, a_hat, x: np.ndarray,
                   b: np.ndarray) -> np.ndarray:
    """Gradient of b . p_hat(x) with respect to the (soft) seed mask."""
    b = np.asarray(b, dtype=float)
    if b.shape[0] != a_hat.shape[0]:
        raise ValueError(f"benefit vector shape {b.shape} incompatible with "
                         f"operator {a_hat.shape}")
    p, cache = forward(theta, a_hat, x)
    dz2 = (b * p * (1.0 - p))[:, None]                # (V, 1)
    ds2 = dz2 @ theta.w2.T                            # (V, H)
    dh1 = spmv(a_hat, ds2)
    dz1 = dh1 * (cache["z1"] > 0)
    ds1 = dz1 @ theta.w1.T                            # (V, 1)
    dx = spmv(a_hat, ds1)
    return dx[:, 0]
