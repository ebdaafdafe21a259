#!/usr/bin/env python3
"""Reproduce the experiment grid from trained models: pairwise matchup
matrix, per-turn metric curves for matchups against VisMax and the RL
agent, and the non-king movement allocation."""

import argparse
import sys
from pathlib import Path

import torch

from infochess.beliefs.model import load_belief_model
from infochess.config import GameConfig
from infochess.harness.experiments import (
    curves_csv,
    matrix_games_csv,
    matrix_summary_csv,
    movement_csv,
    run_matchup_matrix,
    run_movement_allocation,
    run_per_turn_curves,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--models", type=Path, default=Path("models"))
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--matrix-games", type=int, default=100)
    parser.add_argument("--curve-games", type=int, default=250)
    parser.add_argument("--movement-matches", type=int, default=1000)
    args = parser.parse_args()

    torch.set_num_threads(max(1, torch.get_num_threads()))
    model = load_belief_model(args.models / "belief_model.npz")
    rl_spec = f"rl:{args.models / 'rl_checkpoint.npz'}"
    agents = ["random", "vismax", "beliefmax", "hidingvismax", "hidingbeliefmax", rl_spec]
    config = GameConfig()
    args.out.mkdir(parents=True, exist_ok=True)

    print("matchup matrix...", flush=True)
    results = run_matchup_matrix(agents, args.matrix_games, args.seed, config, model)
    (args.out / "matchup_games.csv").write_text(matrix_games_csv(results))
    (args.out / "matchup_summary.csv").write_text(matrix_summary_csv(results))
    for r in results:
        print(f"  {r.agent_a} vs {r.agent_b}: {r.win_fraction_a:.1%} / {r.win_fraction_b:.1%}")

    print("per-turn curves...", flush=True)
    matchups = [(a, "vismax") for a in agents if a != "vismax"]
    matchups += [(a, rl_spec) for a in agents if a != rl_spec]
    matchups += [("vismax", "vismax")]
    curves = run_per_turn_curves(matchups, args.curve_games, args.seed, config, model)
    (args.out / "curves.csv").write_text(curves_csv(curves))

    print("movement allocation...", flush=True)
    allocations = run_movement_allocation(
        agents, args.movement_matches, args.seed, config, model
    )
    (args.out / "movement.csv").write_text(movement_csv(allocations))
    for alloc in allocations:
        mix = ", ".join(f"{kind}: {alloc.fraction(kind):.1%}" for kind in alloc.counts)
        print(f"  {alloc.agent}: {mix}")
    print(f"wrote CSVs to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
