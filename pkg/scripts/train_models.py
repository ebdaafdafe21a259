#!/usr/bin/env python3
"""Desk-scale model pipeline: generate games, train the belief heads, train
the RL scorer, and save both bundles.

Defaults match the acceptance-scale runs (1,000 generation games, 15
epochs, 2,000 RL episodes); pass --paper-scale for the full-size recipe
(10,000 games, 45,000 episodes).
"""

import argparse
import sys
import time
from pathlib import Path

import torch

from infochess.agents.rl import PAPER_SCALE_EPISODES, RLTrainConfig, save_rl_checkpoint, train_rl
from infochess.beliefs.data import generate_trajectories, split_by_game, trajectory_examples
from infochess.beliefs.model import save_belief_model
from infochess.beliefs.training import evaluate_oracle_ce, train_belief_models
from infochess.config import GameConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("models"))
    parser.add_argument("--games", type=int, default=1000)
    parser.add_argument("--epochs", type=int, default=15)
    parser.add_argument("--episodes", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--paper-scale", action="store_true")
    parser.add_argument("--skip-rl", action="store_true")
    args = parser.parse_args()

    if args.paper_scale:
        args.games, args.episodes = 10_000, PAPER_SCALE_EPISODES

    torch.set_num_threads(max(1, torch.get_num_threads()))
    args.out.mkdir(parents=True, exist_ok=True)
    config = GameConfig()

    t0 = time.time()
    trajectories = generate_trajectories(args.games, seed=args.seed, config=config)
    print(f"generated {args.games} games in {time.time() - t0:.0f}s", flush=True)

    train, val = split_by_game(trajectories)
    train_examples = [ex for t in train for ex in trajectory_examples(t)]
    val_examples = [ex for t in val for ex in trajectory_examples(t)]
    print(f"train {len(train_examples)} examples, validation {len(val_examples)}", flush=True)

    t0 = time.time()
    model, curve = train_belief_models(
        train_examples,
        epochs=args.epochs,
        seed=args.seed,
        progress=lambda s: print(
            f"  epoch {s.epoch}: loss {s.total_loss:.4f} "
            f"(king {s.king_ce:.4f}, vis {s.visibility_bce:.4f})",
            flush=True,
        ),
    )
    print(f"belief training took {time.time() - t0:.0f}s", flush=True)
    report = evaluate_oracle_ce(model, val_examples)
    print(
        f"validation oracle CE: model {report['model_mean']:.4f} vs uniform "
        f"{report['uniform_mean']:.4f}; per-turn gain {report['mean_gain_over_turns']:.4f} nats",
        flush=True,
    )
    belief_path = args.out / "belief_model.npz"
    save_belief_model(model, belief_path)
    print(f"wrote {belief_path}", flush=True)

    if args.skip_rl:
        return 0

    t0 = time.time()
    train_config = RLTrainConfig(episodes=args.episodes)

    def progress(batch, total, results):
        if (batch + 1) % max(1, total // 25) == 0:
            window = results[-200:]
            wins = sum(1 for r in window if r.won)
            vs_vismax = [r for r in results if r.opponent == "vismax"]
            vm = (
                sum(1 for r in vs_vismax[-100:] if r.won) / max(1, len(vs_vismax[-100:]))
                if vs_vismax
                else float("nan")
            )
            print(
                f"  batch {batch + 1}/{total}: recent win rate {wins / len(window):.2f}, "
                f"vs vismax {vm:.2f} ({len(vs_vismax)} games)",
                flush=True,
            )

    scorer, results = train_rl(model, train_config, config, seed=args.seed, progress=progress)
    print(f"rl training took {time.time() - t0:.0f}s over {len(results)} episodes", flush=True)
    rl_path = args.out / "rl_checkpoint.npz"
    save_rl_checkpoint(rl_path, scorer, model, train_config)
    print(f"wrote {rl_path}", flush=True)
    vs_vismax = [r for r in results if r.opponent == "vismax"]
    if len(vs_vismax) >= 400:
        first = sum(1 for r in vs_vismax[:200] if r.won) / 200
        last = sum(1 for r in vs_vismax[-200:] if r.won) / 200
        print(f"vs vismax: first-window {first:.3f} -> trailing-window {last:.3f}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
