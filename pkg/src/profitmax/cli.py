"""Command line interface.

Subcommands: stats, train, select, run, plotdata.  All read a flat
key = value config file; --out and --seed override the config's output
directory and master seed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness, inference, trainer


def _load_cfg(args) -> harness.ExperimentConfig:
    cfg = harness.parse_config(args.config)
    if getattr(args, "out", None):
        cfg.out_dir = args.out
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


def cmd_stats(args) -> int:
    cfg = _load_cfg(args)
    print(harness.format_stats(cfg.dataset, cfg.directed))
    return 0


def cmd_train(args) -> int:
    cfg = _load_cfg(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g, probs, cb = harness.load_instance(cfg)
    for budget_idx, budget in enumerate(cfg.budgets):
        ckpt, history = harness.train_for_budget(cfg, g, probs, cb, budget_idx)
        ckpt_path = out / f"checkpoint_b{budget:g}.pmc"
        trainer.save_checkpoint(ckpt_path, ckpt)
        trainer.write_loss_history(out / f"loss_history_b{budget:g}.csv", history)
        print(f"wrote {ckpt_path}")
    return 0


def cmd_select(args) -> int:
    cfg = _load_cfg(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g, probs, cb = harness.load_instance(cfg)
    ckpt = trainer.load_checkpoint(args.checkpoint)
    budget = ckpt.budget
    budget_idx = cfg.budgets.index(budget) if budget in cfg.budgets else 0
    sel_seed = harness.subseed(cfg.seed, harness._TAG_SELECT, budget_idx)
    mask, diag = inference.select_seeds(g, probs, cb, budget, ckpt,
                                        cfg.infer, rng_seed=sel_seed)
    seed_path = out / f"seeds_b{budget:g}.txt"
    harness.write_seed_file(seed_path, g, mask)
    print(f"wrote {seed_path} ({diag['seed_count']} seeds, "
          f"cost {diag['cost_used']:.1f})")
    return 0


def cmd_run(args) -> int:
    cfg = _load_cfg(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = harness.run_experiment(cfg)
    csv_path = out / "records.csv"
    harness.write_records(csv_path, records)
    print(f"wrote {csv_path} ({len(records)} records)")
    return 0


def cmd_plotdata(args) -> int:
    written = harness.write_plotdata(args.csv, args.out or ".")
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profitmax",
        description="Budget-constrained profit maximization experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, checkpoint=False):
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        if checkpoint:
            p.add_argument("--checkpoint", required=True)

    common(sub.add_parser("stats", help="print dataset statistics"))
    common(sub.add_parser("train", help="train one checkpoint per budget"))
    common(sub.add_parser("select", help="select seeds from a checkpoint"),
           checkpoint=True)
    common(sub.add_parser("run", help="full method x budget sweep"))
    plot = sub.add_parser("plotdata", help="tidy per-figure data files")
    plot.add_argument("csv", help="records CSV from the run command")
    plot.add_argument("--out", help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"stats": cmd_stats, "train": cmd_train, "select": cmd_select,
                "run": cmd_run, "plotdata": cmd_plotdata}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
