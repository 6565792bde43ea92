"""Teacher-labeled data generation, joint training, and checkpoint I/O.

Training masks are sampled across the feasible region: draw a target size
k uniformly from [1, floor(B / min cost)], then add uniformly random
distinct affordable nodes until k are placed or the budget blocks every
remaining node.  Each mask is labeled with a configurable number of
independent cascade outcomes.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import autoencoder, surrogate
from .diffusion import propagate_worlds
from .graph import Graph, CostBenefit
from .numerics import adam_step, init_adam

CHECKPOINT_MAGIC = b"PMCKPT1\n"


@dataclass
class TrainingSample:
    x: np.ndarray  # hard seed mask, uint8
    y: np.ndarray  # one cascade outcome, uint8


@dataclass
class TrainConfig:
    masks: int = 400
    labels_per_mask: int = 5
    epochs: int = 300
    batch_size: int = 32
    lam_diff: float = 1.0
    lam_ae: float = 1.0
    lr: float = 1e-2
    hidden: int = 16
    ae_hidden: int = 64
    latent_dim: int = 16

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def generate_training_set(g: Graph, probs: np.ndarray, cb: CostBenefit,
                          budget: float, cfg: TrainConfig,
                          rng_seed: int = 0) -> list[TrainingSample]:
    """Budget-feasible masks with teacher cascade labels."""
    min_cost = float(cb.cost.min())
    k_max = int(budget // min_cost)
    if k_max < 1:
        raise ValueError(f"budget {budget} admits no nonempty seed set "
                         f"(min cost {min_cost:.2f})")
    rng = np.random.default_rng([int(rng_seed), 0])
    xs = np.zeros((cfg.masks, g.node_count), dtype=np.uint8)
    for i in range(cfg.masks):
        k = int(rng.integers(1, k_max + 1))
        spent = 0.0
        placed = 0
        for node in rng.permutation(g.node_count):
            if placed == k:
                break
            if spent + cb.cost[node] <= budget:
                xs[i, node] = 1
                spent += cb.cost[node]
                placed += 1

    label_rng = np.random.default_rng([int(rng_seed), 1])
    reps = np.repeat(xs, cfg.labels_per_mask, axis=0).astype(bool)
    live = label_rng.random((len(reps), g.arc_count)) < probs
    ys = reps.copy()
    propagate_worlds(g.arcs, live, ys)
    return [TrainingSample(x=reps[i].astype(np.uint8), y=ys[i].astype(np.uint8))
            for i in range(len(reps))]


def train(samples: list[TrainingSample], a_hat, cfg: TrainConfig,
          rng_seed: int = 0):
    """Jointly optimize the surrogate and autoencoder with Adam.

    The two loss terms touch disjoint parameters, so each weighted term
    updates its own network from the same shuffled mini-batches.  Returns
    (theta, phi, history) where history rows are
    (epoch, diffusion loss, reconstruction loss, weighted total).
    """
    if not samples:
        raise ValueError("empty training set")
    xs = np.stack([s.x for s in samples]).astype(float)
    ys = np.stack([s.y for s in samples]).astype(float)
    n = a_hat.shape[0]
    if xs.shape[1] != n:
        raise ValueError(f"sample width {xs.shape[1]} != operator dim {n}")

    theta = surrogate.init_surrogate(cfg.hidden, rng_seed=int(rng_seed) + 1)
    phi = autoencoder.init_autoencoder(n, cfg.ae_hidden, cfg.latent_dim,
                                       rng_seed=int(rng_seed) + 2)
    th_state = init_adam(theta.as_dict(), lr=cfg.lr)
    ph_state = init_adam(phi.as_dict(), lr=cfg.lr)
    shuffle_rng = np.random.default_rng([int(rng_seed), 3])

    history = []
    t_total = len(samples)
    for epoch in range(cfg.epochs):
        order = shuffle_rng.permutation(t_total)
        ld_sum = lae_sum = 0.0
        batches = 0
        for start in range(0, t_total, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            l_diff = l_ae = 0.0
            if cfg.lam_diff > 0:
                l_diff, grads = surrogate.loss_and_param_grads(
                    theta, a_hat, xs[idx], ys[idx])
                scaled = {k: cfg.lam_diff * v for k, v in grads.items()}
                adam_step(theta.as_dict(), scaled, th_state)
            if cfg.lam_ae > 0:
                l_ae, grads = autoencoder.recon_loss_and_grads(phi, xs[idx])
                scaled = {k: cfg.lam_ae * v for k, v in grads.items()}
                adam_step(phi.as_dict(), scaled, ph_state)
            ld_sum += l_diff
            lae_sum += l_ae
            batches += 1
        l_diff = ld_sum / batches
        l_ae = lae_sum / batches
        history.append((epoch, l_diff, l_ae,
                        cfg.lam_diff * l_diff + cfg.lam_ae * l_ae))
    return theta, phi, history


def write_loss_history(path, history) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "l_diff", "l_ae", "l_total"])
        for epoch, l_diff, l_ae, l_total in history:
            writer.writerow([epoch, f"{l_diff:.10f}", f"{l_ae:.10f}",
                             f"{l_total:.10f}"])


@dataclass
class Checkpoint:
    theta: surrogate.SurrogateParams
    phi: autoencoder.AutoencoderParams
    node_count: int
    budget: float
    rng_seed: int
    config_fingerprint: str = ""


def save_checkpoint(path, ckpt: Checkpoint) -> None:
    """Deterministic binary dump: magic, JSON header, raw array bytes."""
    arrays = {f"theta.{k}": v for k, v in ckpt.theta.as_dict().items()}
    arrays.update({f"phi.{k}": v for k, v in ckpt.phi.as_dict().items()})
    index = []
    for name, arr in sorted(arrays.items()):
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        index.append({"name": name, "shape": list(arr.shape)})
    header = json.dumps({
        "version": 1,
        "node_count": ckpt.node_count,
        "budget": ckpt.budget,
        "rng_seed": ckpt.rng_seed,
        "config_fingerprint": ckpt.config_fingerprint,
        "arrays": index,
    }, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(len(header).to_bytes(8, "little"))
        fh.write(header)
        for name, _ in ((e["name"], None) for e in index):
            fh.write(np.ascontiguousarray(arrays[name], dtype=np.float64).tobytes())


def load_checkpoint(path) -> Checkpoint:
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"{path}: not a checkpoint file")
        hlen = int.from_bytes(fh.read(8), "little")
        header = json.loads(fh.read(hlen).decode())
        arrays = {}
        for entry in header["arrays"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            buf = fh.read(count * 8)
            arrays[entry["name"]] = np.frombuffer(buf, dtype=np.float64).reshape(shape).copy()
    theta = surrogate.SurrogateParams(w1=arrays["theta.w1"], w2=arrays["theta.w2"])
    phi = autoencoder.AutoencoderParams(
        **{k: arrays[f"phi.{k}"] for k in ("enc_w1", "enc_b1", "enc_w2", "enc_b2",
                                           "dec_w1", "dec_b1", "dec_w2", "dec_b2")})
    return Checkpoint(theta=theta, phi=phi,
                      node_count=header["node_count"],
                      budget=header["budget"],
                      rng_seed=header["rng_seed"],
                      config_fingerprint=header["config_fingerprint"])
