"""Command-line entry point.

Subcommands: simulate (matchup matrix), curves, movement, gen-data,
train-belief, train-rl, replay, serve. Exit codes: 0 success, 2 usage
error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..config import GameConfig, load_config
from ..errors import ConfigError, InfoChessError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="GameConfig JSON file")
    parser.add_argument("--seed", type=int, default=0, help="experiment seed (u64)")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parser.add_argument("--games", type=int, help="games per cell / matchup / match count")
    parser.add_argument("--format", choices=("csv", "jsonl"), default="csv", help="aggregate output format")


def _model_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--belief-model", type=Path, help="trained belief model bundle (.npz)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infochess", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="pairwise matchup matrix")
    _common_flags(p)
    _model_flag(p)
    p.add_argument("--agents", required=True, help="comma-separated agent specs")

    p = sub.add_parser("curves", help="per-turn metric curves")
    _common_flags(p)
    _model_flag(p)
    p.add_argument("--matchups", help="comma-separated a:b pairs (default: all pairs from --agents)")
    p.add_argument("--agents", help="agent specs used to build default matchups")

    p = sub.add_parser("movement", help="non-king movement allocation by piece")
    _common_flags(p)
    _model_flag(p)
    p.add_argument("--agents", required=True, help="comma-separated agent specs")

    p = sub.add_parser("gen-data", help="generate belief-training games")
    _common_flags(p)
    p.add_argument("--dataset", type=Path, help="output dataset path (default <out>/dataset.jsonl)")

    p = sub.add_parser("train-belief", help="train the belief model heads")
    _common_flags(p)
    p.add_argument("--data", type=Path, required=True, help="dataset JSONL from gen-data")
    p.add_argument("--epochs", type=int, default=15)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--model-out", type=Path, help="output bundle (default <out>/belief_model.npz)")

    p = sub.add_parser("train-rl", help="train the RL move scorer")
    _common_flags(p)
    _model_flag(p)
    p.add_argument(
        "--episodes", type=int, default=2000,
        help="REINFORCE updates, each a batch of --batch-games games",
    )
    p.add_argument("--batch-games", type=int, default=10)
    p.add_argument("--lr", type=float, default=3e-4)
    p.add_argument("--checkpoint-out", type=Path, help="output checkpoint (default <out>/rl_checkpoint.npz)")

    p = sub.add_parser("replay", help="replay a game record and print final scores")
    _common_flags(p)
    p.add_argument("record", type=Path, help="GameRecord JSONL file")

    p = sub.add_parser("serve", help="launch the human-play session server")
    _common_flags(p)
    _model_flag(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--blind", action="store_true", help="withhold scores until game over")
    p.add_argument("--idle-timeout", type=float, default=1800.0, help="session expiry in seconds")

    return parser


def _game_config(args) -> GameConfig:
    if args.config is not None:
        return load_config(args.config)
    return GameConfig()


def _load_model(args):
    if getattr(args, "belief_model", None) is None:
        return None
    from ..beliefs.model import load_belief_model

    return load_belief_model(args.belief_model)


def _write(args, name: str, text: str) -> Path:
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / name
    path.write_text(text)
    return path


def _emit(args, stem: str, csv_text: str) -> Path:
    """Write an aggregate as CSV or, with --format jsonl, as one JSON
    object per row."""
    if args.format == "csv":
        return _write(args, f"{stem}.csv", csv_text)
    import csv as csv_mod
    import io
    import json

    rows = csv_mod.DictReader(io.StringIO(csv_text))
    lines = "".join(json.dumps(row) + "\n" for row in rows)
    return _write(args, f"{stem}.jsonl", lines)


def cmd_simulate(args) -> int:
    from .experiments import matrix_games_csv, matrix_summary_csv, run_matchup_matrix

    specs = [s.strip() for s in args.agents.split(",") if s.strip()]
    if not specs:
        raise ConfigError("--agents must name at least one agent")
    results = run_matchup_matrix(
        specs, args.games or 100, args.seed, _game_config(args), _load_model(args)
    )
    games_path = _emit(args, "matchup_games", matrix_games_csv(results))
    summary_path = _emit(args, "matchup_summary", matrix_summary_csv(results))
    for r in results:
        print(
            f"{r.agent_a} vs {r.agent_b}: {r.n_games} games, "
            f"win {r.win_fraction_a:.1%} / {r.win_fraction_b:.1%}, draws {r.draws}"
        )
    print(f"wrote {games_path} and {summary_path}")
    return EXIT_OK


def cmd_curves(args) -> int:
    from .experiments import curves_csv, run_per_turn_curves

    if args.matchups:
        pairs = []
        for item in args.matchups.split(","):
            a, sep, b = item.partition(":")
            if not sep:
                raise ConfigError(f"matchup {item!r} must look like agentA:agentB")
            pairs.append((a.strip(), b.strip()))
    elif args.agents:
        specs = [s.strip() for s in args.agents.split(",") if s.strip()]
        pairs = [(a, b) for i, a in enumerate(specs) for b in specs[i:]]
    else:
        raise ConfigError("curves needs --matchups or --agents")
    curves = run_per_turn_curves(
        pairs, args.games or 250, args.seed, _game_config(args), _load_model(args)
    )
    path = _emit(args, "curves", curves_csv(curves))
    print(f"wrote {path} ({len(pairs)} matchups)")
    return EXIT_OK


def cmd_movement(args) -> int:
    from .experiments import movement_csv, run_movement_allocation

    specs = [s.strip() for s in args.agents.split(",") if s.strip()]
    allocations = run_movement_allocation(
        specs, args.games or 1000, args.seed, _game_config(args), _load_model(args)
    )
    path = _emit(args, "movement", movement_csv(allocations))
    for alloc in allocations:
        mix = ", ".join(f"{kind}: {alloc.fraction(kind):.1%}" for kind in alloc.counts)
        print(f"{alloc.agent}: {mix} (passes {alloc.passes})")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_gen_data(args) -> int:
    from ..beliefs.data import generate_trajectories, save_trajectories

    config = _game_config(args)
    n = args.games or 1000
    trajectories = generate_trajectories(n, args.seed, config)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.dataset or (args.out / "dataset.jsonl")
    save_trajectories(trajectories, path, config.board_size)
    print(f"wrote {path}: {n} games, {len(trajectories)} trajectories")
    return EXIT_OK


def cmd_train_belief(args) -> int:
    from ..beliefs.data import load_trajectories, split_by_game, trajectory_examples
    from ..beliefs.model import save_belief_model
    from ..beliefs.training import evaluate_oracle_ce, train_belief_models

    config = _game_config(args)
    trajectories = load_trajectories(args.data, config.board_size)
    train, val = split_by_game(trajectories)
    train_examples = [ex for t in train for ex in trajectory_examples(t, config.board_size)]
    val_examples = [ex for t in val for ex in trajectory_examples(t, config.board_size)]
    model, curve = train_belief_models(
        train_examples,
        epochs=args.epochs,
        lr=args.lr,
        seed=args.seed,
        board_size=config.board_size,
        progress=lambda s: print(
            f"epoch {s.epoch}: loss {s.total_loss:.4f} (king {s.king_ce:.4f}, vis {s.visibility_bce:.4f})"
        ),
    )
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.model_out or (args.out / "belief_model.npz")
    save_belief_model(model, path)
    if val_examples:
        report = evaluate_oracle_ce(model, val_examples)
        print(
            f"validation oracle CE: model {report['model_mean']:.4f} "
            f"vs uniform {report['uniform_mean']:.4f} "
            f"(gain over turns {report['mean_gain_over_turns']:.4f} nats)"
        )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_train_rl(args) -> int:
    from ..agents.rl import RLTrainConfig, save_rl_checkpoint, train_rl

    model = _load_model(args)
    if model is None:
        raise ConfigError("train-rl requires --belief-model")
    train_config = RLTrainConfig(episodes=args.episodes, batch_games=args.batch_games, lr=args.lr)
    def progress(batch, total, results):
        if (batch + 1) % max(1, total // 20) == 0:
            recent = results[-200:]
            wins = sum(1 for r in recent if r.won)
            print(f"batch {batch + 1}/{total}: recent win rate {wins / len(recent):.2f}")

    scorer, results = train_rl(
        model, train_config, _game_config(args), seed=args.seed, progress=progress
    )
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.checkpoint_out or (args.out / "rl_checkpoint.npz")
    save_rl_checkpoint(path, scorer, model, train_config)
    wins = sum(1 for r in results if r.won)
    print(f"trained {len(results)} episodes, overall win rate {wins / len(results):.3f}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_replay(args) -> int:
    from ..record import load_record, replay
    from ..types import Team

    with open(args.record) as fh:
        record = load_record(fh)
    state = replay(record)
    white, black = state.scores[Team.WHITE], state.scores[Team.BLACK]
    print(f"white {white!r}  black {black!r}")
    if white > black:
        print("winner: white")
    elif black > white:
        print("winner: black")
    else:
        print("draw")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from ..service.app import create_app

    app = create_app(
        belief_model=_load_model(args),
        blind=args.blind,
        idle_timeout=args.idle_timeout,
        default_config=_game_config(args),
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "curves": cmd_curves,
    "movement": cmd_movement,
    "gen-data": cmd_gen_data,
    "train-belief": cmd_train_belief,
    "train-rl": cmd_train_rl,
    "replay": cmd_replay,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfoChessError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
