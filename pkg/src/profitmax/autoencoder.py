"""Seed-mask autoencoder.

Encoder: |V| -> hidden (ReLU) -> latent (linear, unsquashed).
Decoder: latent -> hidden (ReLU) -> |V| logits -> sigmoid, so decoded
masks live strictly inside (0, 1)^{|V|}.  The decoder doubles as the
search-space parameterization at inference time, hence the exposed
gradient-through-decoder helper.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import bce, glorot_uniform, relu, sigmoid


@dataclass
class AutoencoderParams:
    enc_w1: np.ndarray  # (V, H)
    enc_b1: np.ndarray  # (H,)
    enc_w2: np.ndarray  # (H, Z)
    enc_b2: np.ndarray  # (Z,)
    dec_w1: np.ndarray  # (Z, H)
    dec_b1: np.ndarray  # (H,)
    dec_w2: np.ndarray  # (H, V)
    dec_b2: np.ndarray  # (V,)

    @property
    def node_count(self) -> int:
        return self.enc_w1.shape[0]

    @property
    def latent_dim(self) -> int:
        return self.enc_w2.shape[1]

    def as_dict(self) -> dict:
        return {"enc_w1": self.enc_w1, "enc_b1": self.enc_b1,
                "enc_w2": self.enc_w2, "enc_b2": self.enc_b2,
                "dec_w1": self.dec_w1, "dec_b1": self.dec_b1,
                "dec_w2": self.dec_w2, "dec_b2": self.dec_b2}


def init_autoencoder(node_count: int, hidden: int = 64, latent: int = 16,
                     rng_seed: int = 0) -> AutoencoderParams:
    rng = np.random.default_rng(rng_seed)
    return AutoencoderParams(
        enc_w1=glorot_uniform(rng, (node_count, hidden), node_count, hidden),
        enc_b1=np.zeros(hidden),
        enc_w2=glorot_uniform(rng, (hidden, latent), hidden, latent),
        enc_b2=np.zeros(latent),
        dec_w1=glorot_uniform(rng, (latent, hidden), latent, hidden),
        dec_b1=np.zeros(hidden),
        dec_w2=glorot_uniform(rng, (hidden, node_count), hidden, node_count),
        dec_b2=np.zeros(node_count),
    )


def encode(phi: AutoencoderParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    squeeze = x.ndim == 1
    x2 = np.atleast_2d(x)
    if x2.shape[1] != phi.node_count:
        raise ValueError(f"mask width {x2.shape[1]} != {phi.node_count}")
    h = relu(x2 @ phi.enc_w1 + phi.enc_b1)
    z = h @ phi.enc_w2 + phi.enc_b2
    return z[0] if squeeze else z


def decode(phi: AutoencoderParams, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    squeeze = z.ndim == 1
    z2 = np.atleast_2d(z)
    if z2.shape[1] != phi.latent_dim:
        raise ValueError(f"latent width {z2.shape[1]} != {phi.latent_dim}")
    h = relu(z2 @ phi.dec_w1 + phi.dec_b1)
    x_tilde = sigmoid(h @ phi.dec_w2 + phi.dec_b2)
    return x_tilde[0] if squeeze else x_tilde


def decode_grad_z(phi: AutoencoderParams, z: np.ndarray,
                  dx_soft: np.ndarray) -> np.ndarray:
    """Backpropagate a gradient w.r.t. the decoded soft mask down to z."""
    z = np.asarray(z, dtype=float)
    zd = z @ phi.dec_w1 + phi.dec_b1
    h = relu(zd)
    x_tilde = sigmoid(h @ phi.dec_w2 + phi.dec_b2)
    dlogits = dx_soft * x_tilde * (1.0 - x_tilde)
    dh = dlogits @ phi.dec_w2.T
    dzd = dh * (zd > 0)
    return dzd @ phi.dec_w1.T


def recon_loss_and_grads(phi: AutoencoderParams, xs: np.ndarray):
    """Mean reconstruction BCE over a batch of masks plus all weight grads."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[0] == 0:
        raise ValueError("empty batch")
    t, n = xs.shape
    if n != phi.node_count:
        raise ValueError(f"mask width {n} != {phi.node_count}")

    ze = xs @ phi.enc_w1 + phi.enc_b1
    he = relu(ze)
    z = he @ phi.enc_w2 + phi.enc_b2
    zd = z @ phi.dec_w1 + phi.dec_b1
    hd = relu(zd)
    x_tilde = sigmoid(hd @ phi.dec_w2 + phi.dec_b2)
    loss = bce(x_tilde, xs)

    dlogits = (x_tilde - xs) / (t * n)
    grads = {
        "dec_w2": hd.T @ dlogits,
        "dec_b2": dlogits.sum(axis=0),
    }
    dhd = dlogits @ phi.dec_w2.T
    dzd = dhd * (zd > 0)
    grads["dec_w1"] = z.T @ dzd
    grads["dec_b1"] = dzd.sum(axis=0)
    dz = dzd @ phi.dec_w1.T
    grads["enc_w2"] = he.T @ dz
    grads["enc_b2"] = dz.sum(axis=0)
    dhe = dz @ phi.enc_w2.T
    dze = dhe * (ze > 0)
    grads["enc_w1"] = xs.T @ dze
    grads["enc_b1"] = dze.sum(axis=0)
    return loss, grads
