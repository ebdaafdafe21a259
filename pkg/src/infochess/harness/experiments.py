"""Experiment drivers: pairwise matrices, per-turn curves, movement mix.

Every experiment is a pure function of (config, seed): per-game seeds are
derived from the experiment seed and stable indices, colors come from
dedicated child streams, and CSV serialization is deterministic, so a
rerun reproduces output bytes exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from ..agents import make_agent
from ..beliefs.model import BeliefModel
from ..config import GameConfig
from ..infotheory import METRIC_FIELDS, MetricSample
from ..rng import derive_seed
from ..types import PieceKind, Team
from .match import run_match, safe_match


@dataclass
class GameOutcome:
    game_id: int
    color_a: Team  # the team agent_a played
    score_a: float
    score_b: float

    @property
    def winner(self) -> str:
        if self.score_a > self.score_b:
            return "a"
        if self.score_b > self.score_a:
            return "b"
        return "draw"


@dataclass
class MatchupResult:
    agent_a: str
    agent_b: str
    games: list[GameOutcome] = field(default_factory=list)

    @property
    def n_games(self) -> int:
        return len(self.games)

    @property
    def wins_a(self) -> int:
        return sum(1 for g in self.games if g.winner == "a")

    @property
    def wins_b(self) -> int:
        return sum(1 for g in self.games if g.winner == "b")

    @property
    def draws(self) -> int:
        return sum(1 for g in self.games if g.winner == "draw")

    @property
    def win_fraction_a(self) -> float:
        return self.wins_a / self.n_games

    @property
    def win_fraction_b(self) -> float:
        return self.wins_b / self.n_games

    @property
    def draw_fraction(self) -> float:
        return self.draws / self.n_games

    @property
    def mean_score_a(self) -> float:
        return float(np.mean([g.score_a for g in self.games]))

    @property
    def mean_score_b(self) -> float:
        return float(np.mean([g.score_b for g in self.games]))


def _pair_agents(spec_a: str, spec_b: str, model: BeliefModel | None):
    # Distinct instances even for self-play: one agent object per side.
    return make_agent(spec_a, model), make_agent(spec_b, model)


def play_matchup(
    spec_a: str,
    spec_b: str,
    n_games: int,
    seed: int,
    config: GameConfig = GameConfig(),
    belief_model: BeliefModel | None = None,
    color_policy: str = "random-split",
    collect_samples: bool = False,
) -> tuple[MatchupResult, list[tuple[str, MetricSample]]]:
    """Play ``n_games`` between two specs. Colors: random-split draws each
    game's colors from a child stream; fixed keeps agent_a on White."""
    agent_a, agent_b = _pair_agents(spec_a, spec_b, belief_model)
    color_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(97,)))
    result = MatchupResult(agent_a=spec_a, agent_b=spec_b)
    tagged: list[tuple[str, MetricSample]] = []
    for g in range(n_games):
        a_is_white = True if color_policy == "fixed" else bool(color_rng.integers(2) == 0)
        game_seed = derive_seed(seed, g)
        white, black = (agent_a, agent_b) if a_is_white else (agent_b, agent_a)
        played = safe_match(white, black, config, game_seed)
        if played is None:
            continue
        record, samples = played
        a_team = Team.WHITE if a_is_white else Team.BLACK
        result.games.append(
            GameOutcome(
                game_id=g,
                color_a=a_team,
                score_a=record.final_scores[a_team],
                score_b=record.final_scores[a_team.opponent],
            )
        )
        if collect_samples:
            for s in samples:
                tagged.append((spec_a if s.team is a_team else spec_b, s))
    return result, tagged


def run_matchup_matrix(
    agent_specs: list[str],
    games_per_cell: int,
    seed: int,
    config: GameConfig = GameConfig(),
    belief_model: BeliefModel | None = None,
) -> list[MatchupResult]:
    """Fig-2-style pairwise matrix: each unordered pair plays
    games_per_cell per color orientation; self-play cells alternate colors
    within a single games_per_cell block."""
    results = []
    n = len(agent_specs)
    for i in range(n):
        for j in range(i, n):
            cell_seed = derive_seed(seed, i, j)
            spec_a, spec_b = agent_specs[i], agent_specs[j]
            agent_a, agent_b = _pair_agents(spec_a, spec_b, belief_model)
            result = MatchupResult(agent_a=spec_a, agent_b=spec_b)
            if i == j:
                plan = [(g, g % 2 == 0) for g in range(games_per_cell)]
            else:
                plan = [(g, True) for g in range(games_per_cell)] + [
                    (games_per_cell + g, False) for g in range(games_per_cell)
                ]
            for game_id, a_is_white in plan:
                game_seed = derive_seed(cell_seed, game_id)
                white, black = (agent_a, agent_b) if a_is_white else (agent_b, agent_a)
                played = safe_match(white, black, config, game_seed)
                if played is None:
                    continue
                record, _ = played
                a_team = Team.WHITE if a_is_white else Team.BLACK
                result.games.append(
                    GameOutcome(
                        game_id=game_id,
                        color_a=a_team,
                        score_a=record.final_scores[a_team],
                        score_b=record.final_scores[a_team.opponent],
                    )
                )
            results.append(result)
    return results


def matrix_games_csv(results: list[MatchupResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["agent_a", "agent_b", "game_id", "color_a", "score_a", "score_b", "winner"])
    for r in results:
        for g in r.games:
            writer.writerow(
                [r.agent_a, r.agent_b, g.game_id, str(g.color_a), repr(g.score_a), repr(g.score_b), g.winner]
            )
    return buf.getvalue()


def matrix_summary_csv(results: list[MatchupResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["agent_a", "agent_b", "games", "wins_a", "wins_b", "draws", "win_frac_a", "win_frac_b"]
    )
    for r in results:
        writer.writerow(
            [
                r.agent_a,
                r.agent_b,
                r.n_games,
                r.wins_a,
                r.wins_b,
                r.draws,
                repr(r.win_fraction_a),
                repr(r.win_fraction_b),
            ]
        )
    return buf.getvalue()


def run_per_turn_curves(
    matchups: list[tuple[str, str]],
    n_games: int = 250,
    seed: int = 0,
    config: GameConfig = GameConfig(),
    belief_model: BeliefModel | None = None,
) -> dict[tuple[str, str], dict]:
    """Per matchup, per agent, per metric, per turn: mean and population
    standard deviation over n_games with randomly split colors."""
    out = {}
    for m_index, (spec_a, spec_b) in enumerate(matchups):
        _, tagged = play_matchup(
            spec_a,
            spec_b,
            n_games,
            derive_seed(seed, m_index),
            config,
            belief_model,
            collect_samples=True,
        )
        by_agent_turn: dict[tuple[str, int], list[MetricSample]] = {}
        for agent, sample in tagged:
            by_agent_turn.setdefault((agent, sample.turn), []).append(sample)
        stats = {}
        for (agent, turn), rows in by_agent_turn.items():
            for metric in METRIC_FIELDS:
                values = np.array([getattr(s, metric) for s in rows])
                stats[(agent, metric, turn)] = (
                    float(values.mean()),
                    float(values.std()),
                    len(rows),
                )
        out[(spec_a, spec_b)] = stats
    return out


def curves_csv(curves: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["matchup", "agent", "metric", "turn", "mean", "std"])
    for (spec_a, spec_b), stats in curves.items():
        matchup = f"{spec_a}-vs-{spec_b}"
        for (agent, metric, turn) in sorted(stats, key=lambda k: (k[0], k[1], k[2])):
            mean, std, _ = stats[(agent, metric, turn)]
            writer.writerow([matchup, agent, metric, turn, repr(mean), repr(std)])
    return buf.getvalue()


@dataclass
class MovementAllocation:
    agent: str
    counts: dict[PieceKind, int]
    passes: int

    @property
    def total_moves(self) -> int:
        return sum(self.counts.values())

    def fraction(self, kind: PieceKind) -> float:
        return self.counts[kind] / self.total_moves

    @property
    def pass_fraction(self) -> float:
        return self.passes / (self.total_moves + self.passes)


def run_movement_allocation(
    agent_specs: list[str],
    n_matches: int = 1000,
    seed: int = 0,
    config: GameConfig = GameConfig(),
    belief_model: BeliefModel | None = None,
    subjects: list[str] | None = None,
) -> list[MovementAllocation]:
    """Fig-4 protocol: per subject agent, n_matches games against opponents
    drawn uniformly from agent_specs (self included), random colors; count
    the subject's non-king moves by piece kind (passes held separately)."""
    allocations = []
    for s_index, spec in enumerate(subjects if subjects is not None else agent_specs):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(s_index, 7)))
        counts = {kind: 0 for kind in (PieceKind.PAWN, PieceKind.ROOK, PieceKind.BISHOP)}
        passes = 0
        subject = make_agent(spec, belief_model)
        for m in range(n_matches):
            opponent_spec = agent_specs[int(rng.integers(len(agent_specs)))]
            opponent = make_agent(opponent_spec, belief_model)
            subject_is_white = bool(rng.integers(2) == 0)
            game_seed = derive_seed(seed, s_index, m)
            white, black = (subject, opponent) if subject_is_white else (opponent, subject)
            played = safe_match(white, black, config, game_seed)
            if played is None:
                continue
            record, _ = played
            subject_team = Team.WHITE if subject_is_white else Team.BLACK
            for entry in record.turns:
                if entry.team is subject_team:
                    if entry.non_king_move.is_pass:
                        passes += 1
                    else:
                        counts[entry.non_king_move.piece] += 1
        allocations.append(MovementAllocation(agent=spec, counts=counts, passes=passes))
    return allocations


def movement_csv(allocations: list[MovementAllocation]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["agent", "piece_kind", "fraction", "n_moves"])
    for alloc in allocations:
        for kind in (PieceKind.PAWN, PieceKind.ROOK, PieceKind.BISHOP):
            writer.writerow([alloc.agent, str(kind), repr(alloc.fraction(kind)), alloc.counts[kind]])
        writer.writerow([alloc.agent, "pass", repr(alloc.pass_fraction), alloc.passes])
    return buf.getvalue()


def metrics_csv(rows: list[tuple[str, int, str, MetricSample]]) -> str:
    """Raw per-turn sample export: (matchup, game_id, agent, sample)."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["matchup", "game_id", "turn", "team", "agent", "score_delta", "belief_entropy", "oracle_ce", "observer_ce"]
    )
    for matchup, game_id, agent, s in rows:
        writer.writerow(
            [
                matchup,
                game_id,
                s.turn,
                str(s.team),
                agent,
                repr(s.score_delta),
                repr(s.belief_entropy),
                repr(s.oracle_ce),
                repr(s.observer_ce),
            ]
        )
    return buf.getvalue()
