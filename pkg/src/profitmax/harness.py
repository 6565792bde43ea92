"""Experiment orchestration: config parsing, seed selection runs,
teacher evaluation, and CSV/plot-data output.

Final profit comparisons always use the Monte Carlo teacher, never the
surrogate, and all methods within one (dataset, budget) cell share the
same evaluation seed so they face identical randomness.
"""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import baselines, inference, trainer
from .diffusion import evaluate_profit
from .graph import (Graph, CostBenefit, assign_cost_benefit,
                    assign_probabilities, graph_stats, load_edge_list,
                    normalized_operator)

logger = logging.getLogger(__name__)

KNOWN_METHODS = (
    "random", "high_degree", "single_discount", "degree_discount",
    "high_clustering", "simple_greedy", "stochastic_greedy", "double_greedy",
    "latent_gcn",
)

CSV_HEADER = ["dataset", "prob_model", "budget", "method", "profit",
              "seed_size", "time_sec", "rng_seed"]

# Tags for deriving purpose-specific sub-seeds from the master seed.
_TAG_PROBS, _TAG_CB, _TAG_TRAIN, _TAG_SELECT, _TAG_EVAL, _TAG_METHOD = range(6)


def subseed(master: int, *parts: int) -> int:
    """Stable sub-seed derived from the master seed and integer tags."""
    ss = np.random.SeedSequence([int(master), *[int(p) for p in parts]])
    return int(ss.generate_state(1)[0])


@dataclass
class ExperimentConfig:
    dataset: str = ""
    directed: bool = True
    prob_model: str = "uniform"
    p_c: float = 0.1
    cost_min: float = 50.0
    cost_max: float = 100.0
    benefit_min: float = 800.0
    benefit_max: float = 1000.0
    budgets: list = field(default_factory=lambda: [500.0])
    methods: list = field(default_factory=lambda: ["random"])
    r_eval: int = 10000
    seed: int = 0
    out_dir: str = "results"
    train: trainer.TrainConfig = field(default_factory=trainer.TrainConfig)
    infer: inference.InferenceConfig = field(default_factory=inference.InferenceConfig)
    baseline: baselines.BaselineConfig = field(default_factory=baselines.BaselineConfig)

    def validate(self) -> None:
        if self.prob_model not in ("uniform", "trivalency"):
            raise ValueError(f"unknown prob_model {self.prob_model!r}")
        if not self.budgets or any(b <= 0 for b in self.budgets):
            raise ValueError("budgets must be strictly positive")
        if list(self.budgets) != sorted(self.budgets) or \
                len(set(self.budgets)) != len(self.budgets):
            raise ValueError("budgets must be strictly ascending")
        for m in self.methods:
            if m not in KNOWN_METHODS:
                raise ValueError(f"unknown method {m!r}; known: {KNOWN_METHODS}")
        if self.r_eval < 1:
            raise ValueError("r_eval must be >= 1")


_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False}

_KEYS = {
    "dataset": str, "directed": "bool", "prob_model": str, "p_c": float,
    "cost_min": float, "cost_max": float,
    "benefit_min": float, "benefit_max": float,
    "budgets": "floats", "methods": "strs", "r_eval": int, "seed": int,
    "out_dir": str,
    "train_masks": int, "labels_per_mask": int, "epochs": int,
    "batch_size": int, "lam_diff": float, "lam_ae": float, "lr": float,
    "hidden": int, "ae_hidden": int, "latent_dim": int,
    "mu": "opt_float", "restarts": int, "ascent_steps": int,
    "step_size": float,
    "gain_rollouts": int, "sample_fraction": float,
}


def parse_config(path) -> ExperimentConfig:
    """Read a flat key = value config file ('#' starts a comment)."""
    path = Path(path)
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, raw = line.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key not in _KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            kind = _KEYS[key]
            if kind == "bool":
                if raw.lower() not in _BOOL:
                    raise ValueError(f"{path}:{lineno}: bad boolean {raw!r}")
                values[key] = _BOOL[raw.lower()]
            elif kind == "floats":
                values[key] = [float(tok) for tok in raw.split(",") if tok.strip()]
            elif kind == "strs":
                values[key] = [tok.strip() for tok in raw.split(",") if tok.strip()]
            elif kind == "opt_float":
                values[key] = None if raw.lower() == "auto" else float(raw)
            else:
                values[key] = kind(raw)

    cfg = ExperimentConfig()
    tr, inf, bl = cfg.train, cfg.infer, cfg.baseline
    direct = {"dataset", "directed", "prob_model", "p_c", "cost_min",
              "cost_max", "benefit_min", "benefit_max", "budgets", "methods",
              "r_eval", "seed", "out_dir"}
    for key, val in values.items():
        if key in direct:
            setattr(cfg, key, val)
        elif key == "train_masks":
            tr.masks = val
        elif key in ("labels_per_mask", "epochs", "batch_size", "lam_diff",
                     "lam_ae", "lr", "hidden", "ae_hidden", "latent_dim"):
            setattr(tr, key, val)
        elif key in ("mu", "restarts", "ascent_steps", "step_size"):
            setattr(inf, key, val)
        elif key in ("gain_rollouts", "sample_fraction"):
            setattr(bl, key, val)
    cfg.validate()
    return cfg


def load_instance(cfg: ExperimentConfig):
    """Load the graph and derive probabilities and costs/benefits."""
    g = load_edge_list(cfg.dataset, directed=cfg.directed)
    probs = assign_probabilities(g, cfg.prob_model, p=cfg.p_c,
                                 rng_seed=subseed(cfg.seed, _TAG_PROBS))
    cb = assign_cost_benefit(g, (cfg.cost_min, cfg.cost_max),
                             (cfg.benefit_min, cfg.benefit_max),
                             rng_seed=subseed(cfg.seed, _TAG_CB))
    return g, probs, cb


def train_for_budget(cfg: ExperimentConfig, g: Graph, probs, cb,
                     budget_idx: int) -> trainer.Checkpoint:
    budget = cfg.budgets[budget_idx]
    seed = subseed(cfg.seed, _TAG_TRAIN, budget_idx)
    samples = trainer.generate_training_set(g, probs, cb, budget,
                                            cfg.train, rng_seed=seed)
    a_hat = normalized_operator(g)
    theta, phi, history = trainer.train(samples, a_hat, cfg.train, rng_seed=seed)
    ckpt = trainer.Checkpoint(theta=theta, phi=phi, node_count=g.node_count,
                              budget=budget, rng_seed=seed,
                              config_fingerprint=cfg.train.fingerprint())
    return ckpt, history


def run_method(cfg: ExperimentConfig, g: Graph, probs, cb,
               method: str, budget_idx: int) -> np.ndarray:
    """Dispatch one selection method.  For the learned pipeline this
    includes per-budget teacher labeling and training."""
    budget = cfg.budgets[budget_idx]
    seed = subseed(cfg.seed, _TAG_METHOD, budget_idx,
                   KNOWN_METHODS.index(method))
    if method == "random":
        return baselines.random_selection(g, cb, budget, rng_seed=seed)
    if method == "high_degree":
        return baselines.high_degree(g, cb, budget)
    if method == "single_discount":
        return baselines.single_discount(g, cb, budget)
    if method == "degree_discount":
        p_scalar = cfg.p_c if cfg.prob_model == "uniform" else float(probs.mean())
        return baselines.degree_discount(g, cb, budget, p_scalar)
    if method == "high_clustering":
        return baselines.high_clustering(g, cb, budget)
    if method == "simple_greedy":
        return baselines.simple_greedy(g, probs, cb, budget, cfg.baseline,
                                       rng_seed=seed)
    if method == "stochastic_greedy":
        return baselines.stochastic_greedy(g, probs, cb, budget, cfg.baseline,
                                           rng_seed=seed)
    if method == "double_greedy":
        return baselines.double_greedy(g, probs, cb, budget, cfg.baseline,
                                       rng_seed=seed)
    if method == "latent_gcn":
        ckpt, _ = train_for_budget(cfg, g, probs, cb, budget_idx)
        sel_seed = subseed(cfg.seed, _TAG_SELECT, budget_idx)
        mask, _ = inference.select_seeds(g, probs, cb, budget, ckpt,
                                         cfg.infer, rng_seed=sel_seed)
        return mask
    raise ValueError(f"unknown method {method!r}")


def run_experiment(cfg: ExperimentConfig) -> list[dict]:
    """Full sweep over (budget, method) cells; returns record dicts."""
    cfg.validate()
    g, probs, cb = load_instance(cfg)
    dataset_name = Path(cfg.dataset).stem
    records = []
    for budget_idx, budget in enumerate(cfg.budgets):
        eval_seed = subseed(cfg.seed, _TAG_EVAL, budget_idx)
        for method in cfg.methods:
            t0 = time.perf_counter()
            mask = run_method(cfg, g, probs, cb, method, budget_idx)
            elapsed = time.perf_counter() - t0
            est = evaluate_profit(g, probs, cb, mask, cfg.r_eval,
                                  rng_seed=eval_seed)
            records.append({
                "dataset": dataset_name,
                "prob_model": cfg.prob_model,
                "budget": budget,
                "method": method,
                "profit": est.profit,
                "seed_size": int(mask.sum()),
                "time_sec": elapsed,
                "rng_seed": cfg.seed,
            })
            logger.info("budget=%g method=%s profit=%.1f seeds=%d (%.2fs)",
                        budget, method, est.profit, int(mask.sum()), elapsed)
    return records


def write_records(path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow([rec["dataset"], rec["prob_model"],
                             f"{rec['budget']:g}", rec["method"],
                             f"{rec['profit']:.6f}", rec["seed_size"],
                             f"{rec['time_sec']:.4f}", rec["rng_seed"]])


def read_records(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header {reader.fieldnames}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no records")
    return rows


def write_plotdata(csv_path, out_dir) -> list[Path]:
    """One tidy (budget, method, value) file per (dataset, prob_model, metric)."""
    rows = read_records(csv_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    groups = sorted({(r["dataset"], r["prob_model"]) for r in rows})
    for dataset, prob_model in groups:
        for metric in ("profit", "seed_size", "time_sec"):
            path = out_dir / f"{dataset}_{prob_model}_{metric}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["budget", "method", "value"])
                for r in rows:
                    if (r["dataset"], r["prob_model"]) == (dataset, prob_model):
                        writer.writerow([r["budget"], r["method"], r[metric]])
            written.append(path)
    return written


def write_seed_file(path, g: Graph, mask: np.ndarray) -> None:
    """One original node id per line."""
    ids = g.id_map[np.flatnonzero(mask)]
    with open(path, "w") as fh:
        for orig in ids:
            fh.write(f"{int(orig)}\n")


def read_seed_file(path, g: Graph) -> np.ndarray:
    lookup = {int(orig): i for i, orig in enumerate(g.id_map)}
    mask = np.zeros(g.node_count, dtype=np.uint8)
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                mask[lookup[int(line)]] = 1
    return mask


def format_stats(path, directed: bool) -> str:
    g = load_edge_list(path, directed=directed)
    stats = graph_stats(g)
    lines = [f"{'dataset':<16}{Path(path).stem}",
             f"{'nodes':<16}{stats['nodes']}",
             f"{'edges':<16}{stats['edges']}",
             f"{'max_degree':<16}{stats['max_degree']}",
             f"{'avg_degree':<16}{stats['avg_degree']:.2f}"]
    return "\n".join(lines)
