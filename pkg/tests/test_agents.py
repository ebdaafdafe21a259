import math

import numpy as np
import pytest
import torch

from conftest import random_playout
from test_engine import build_state

from infochess.agents import make_agent
from infochess.agents.base import RandomAgent
from infochess.agents.heuristics import (
    HeuristicAgent,
    compose_heuristic,
    greedy_infogain_choice,
    hiding_king_choice,
    hypothetical_visibility,
    information_gain_per_move,
)
from infochess.agents.play import play_game
from infochess.agents.rl import (
    ENTROPY_COEF_END,
    ENTROPY_COEF_START,
    MoveScorer,
    RLAgent,
    RLTrainConfig,
    entropy_coefficient,
    load_rl_checkpoint,
    move_features,
    save_rl_checkpoint,
    train_rl,
)
from infochess.beliefs.encoding import decanonicalize_vector, encode_history
from infochess.beliefs.model import BeliefModel, predict_king_belief, trunk_hash
from infochess.beliefs.uniform import uniform_belief
from infochess.config import GameConfig
from infochess.engine import legal_moves, new_game, observe
from infochess.errors import ConfigError, ModelError
from infochess.geometry import mask_to_bool_array, mask_to_squares
from infochess.types import MoveAction, PieceKind, Team, TurnPhase, parse_square

RNG = np.random.default_rng


def bind(agent, team=Team.WHITE, config=None, seed=0):
    agent.start_game(team, config or GameConfig(), RNG(seed))
    return agent


class TestRandomAgent:
    def test_single_legal_move_certain(self):
        agent = bind(RandomAgent())
        move = MoveAction(PieceKind.PAWN, 0, 1)
        for _ in range(20):
            assert agent.choose_non_king(None, [move], []) is move

    def test_uniform_move_frequencies(self):
        agent = bind(RandomAgent(), seed=42)
        moves = [MoveAction(PieceKind.PAWN, 8, 8 + d) for d in (-1, 1, 8, 9)]
        n = 10_000
        counts = {i: 0 for i in range(4)}
        for _ in range(n):
            counts[moves.index(agent.choose_non_king(None, moves, []))] += 1
        sigma = math.sqrt(0.25 * 0.75 / n)
        for c in counts.values():
            assert abs(c / n - 0.25) < 3 * sigma

    def test_belief_equals_uniform_belief(self):
        state = new_game(GameConfig(seed=12))
        agent = bind(RandomAgent())
        obs = observe(state, Team.WHITE)
        assert np.array_equal(agent.inference_belief(obs, []), uniform_belief(obs))


class TestGreedyInfogain:
    def test_revealing_move_chosen(self):
        # rook can step onto the open file and sweep fog; pawn moves reveal less
        state = new_game(GameConfig(seed=1))
        obs = observe(state, Team.WHITE)
        legal = legal_moves(state, Team.WHITE, TurnPhase.NON_KING_MOVE)
        belief = uniform_belief(obs)
        gains = information_gain_per_move(obs, legal, belief, 8)
        best = gains.max()
        agent = bind(compose_heuristic("vismax"), seed=3)
        for _ in range(20):
            choice = agent.choose_non_king(obs, legal, state.history[Team.WHITE])
            idx = legal.index(choice)
            assert gains[idx] == best

    def test_gain_matches_newly_visible_count_under_uniform_belief(self):
        for seed in range(30):
            state = random_playout(seed, seed % 11)
            if state.game_over:
                continue
            team = state.current_team
            obs = observe(state, team)
            if obs.opponent_king_square is not None:
                continue
            legal = legal_moves(state, team, TurnPhase.NON_KING_MOVE)
            if legal[0].is_pass:
                continue
            belief = uniform_belief(obs)
            gains = information_gain_per_move(obs, legal, belief, 8)
            fog_now = set(np.flatnonzero(~mask_to_bool_array(obs.visible, 64)))
            counts = [
                len(fog_now & set(mask_to_squares(v)))
                for v in hypothetical_visibility(obs, legal, 8)
            ]
            gain_argmax = {i for i, g in enumerate(gains) if g == gains.max()}
            count_argmax = {i for i, c in enumerate(counts) if c == max(counts)}
            assert gain_argmax == count_argmax

    def test_equal_gains_break_ties_uniformly(self):
        # adjacent kings: prior is one-hot on a visible square, every candidate
        # has identical (zero) gain, so the choice must be uniform
        state = build_state(
            [(PieceKind.ROOK, "a1"), (PieceKind.KING, "e4")],
            [(PieceKind.KING, "e5")],
        )
        obs = observe(state, Team.WHITE)
        legal = legal_moves(state, Team.WHITE, TurnPhase.NON_KING_MOVE)
        belief = uniform_belief(obs)
        gains = information_gain_per_move(obs, legal, belief, 8)
        assert np.all(gains == gains[0])
        rng = RNG(9)
        n = 6_000
        counts = {i: 0 for i in range(len(legal))}
        for _ in range(n):
            counts[legal.index(greedy_infogain_choice(obs, legal, belief, 8, rng))] += 1
        p = 1 / len(legal)
        sigma = math.sqrt(p * (1 - p) / n)
        for c in counts.values():
            assert abs(c / n - p) < 4 * sigma


class TestHidingKing:
    def test_minimal_visibility_destination_chosen(self):
        moves = [MoveAction(PieceKind.KING, 20, sq) for sq in (21, 12, 28)]
        vis = np.full(64, 0.9)
        vis[12] = 0.1
        rng = RNG(0)
        for _ in range(10):
            assert hiding_king_choice(vis, moves, rng).to_sq == 12

    def test_equal_predictions_tie_break_uniform(self):
        moves = [MoveAction(PieceKind.KING, 20, sq) for sq in (21, 12, 28, 19)]
        vis = np.full(64, 0.5)
        rng = RNG(5)
        n = 8_000
        counts = {m.to_sq: 0 for m in moves}
        for _ in range(n):
            counts[hiding_king_choice(vis, moves, rng).to_sq] += 1
        sigma = math.sqrt(0.25 * 0.75 / n)
        for c in counts.values():
            assert abs(c / n - 0.25) < 4 * sigma

    def test_forced_pass_returned(self):
        rng = RNG(1)
        assert hiding_king_choice(np.zeros(64), [MoveAction.passing()], rng).is_pass


class TestComposition:
    def test_vismax_needs_no_model(self):
        agent = compose_heuristic("vismax")
        assert agent.kind == "vismax"
        assert agent.king_belief == "uniform"
        assert agent.king_policy == "random"

    def test_learned_agents_require_model(self):
        for kind in ("beliefmax", "hidingvismax", "hidingbeliefmax"):
            with pytest.raises(ConfigError):
                compose_heuristic(kind, None)

    def test_grid_wiring(self, tiny_trained_model):
        hb = compose_heuristic("hidingbeliefmax", tiny_trained_model)
        assert (hb.king_belief, hb.king_policy) == ("learned", "hiding")
        hv = compose_heuristic("hidingvismax", tiny_trained_model)
        assert (hv.king_belief, hv.king_policy) == ("uniform", "hiding")
        b = compose_heuristic("beliefmax", tiny_trained_model)
        assert (b.king_belief, b.king_policy) == ("learned", "random")

    def test_beliefmax_inference_is_model_output_exactly(self, tiny_trained_model):
        state = random_playout(31, 6)
        team = state.current_team
        history = state.history[team]
        obs = observe(state, team)
        if obs.opponent_king_square is not None:
            pytest.skip("king visible for this seed")
        agent = bind(compose_heuristic("beliefmax", tiny_trained_model), team=team)
        got = agent.inference_belief(obs, history)
        tokens, positions = encode_history(history)
        want = decanonicalize_vector(
            predict_king_belief(tiny_trained_model, tokens, positions), team
        )
        assert np.array_equal(got, want)

    def test_visible_king_overrides_model(self, tiny_trained_model):
        state = build_state(
            [(PieceKind.KING, "e4"), (PieceKind.ROOK, "a1")], [(PieceKind.KING, "e5")]
        )
        agent = bind(compose_heuristic("beliefmax", tiny_trained_model))
        obs = observe(state, Team.WHITE)
        belief = agent.inference_belief(obs, state.history[Team.WHITE])
        assert belief[parse_square("e5")] == 1.0

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError):
            compose_heuristic("maxbelief")

    def test_make_agent_specs(self, tiny_trained_model):
        assert make_agent("random").kind == "random"
        assert make_agent("vismax").kind == "vismax"
        assert make_agent("beliefmax", tiny_trained_model).kind == "beliefmax"
        with pytest.raises(ConfigError):
            make_agent("rl:")
        with pytest.raises(ConfigError):
            make_agent("no-such-agent")


class TestMoveFeatures:
    def test_white_frame(self):
        feats = move_features(
            [MoveAction(PieceKind.ROOK, parse_square("a1"), parse_square("a2"))],
            Team.WHITE,
            8,
        )[0]
        assert np.allclose(feats[:4], [0.0, 0.0, 0.0, 1 / 7])
        assert feats[4 + int(PieceKind.ROOK)] == 1.0

    def test_black_frame_mirrors_ranks(self):
        feats = move_features(
            [MoveAction(PieceKind.PAWN, parse_square("a8"), parse_square("a7"))],
            Team.BLACK,
            8,
        )[0]
        # a8 is the black player's own back rank: canonically rank 0
        assert np.allclose(feats[:4], [0.0, 0.0, 0.0, 1 / 7])
        assert feats[4 + int(PieceKind.PAWN)] == 1.0


class TestRLAgent:
    def test_single_legal_move_certain(self, tiny_trained_model):
        scorer = MoveScorer()
        agent = bind(RLAgent(tiny_trained_model, scorer))
        move = MoveAction(PieceKind.KING, 0, 1)
        assert agent.choose_king([move], random_playout(1, 0).history[Team.WHITE], None) is move

    def test_zero_scorer_samples_uniformly(self, tiny_trained_model):
        scorer = MoveScorer()
        with torch.no_grad():
            for p in scorer.parameters():
                p.zero_()
        agent = bind(RLAgent(tiny_trained_model, scorer), seed=11)
        state = new_game(GameConfig(seed=2))
        legal = legal_moves(state, Team.WHITE, TurnPhase.NON_KING_MOVE)
        history = state.history[Team.WHITE]
        obs = observe(state, Team.WHITE)
        n = 6_000
        counts = {i: 0 for i in range(len(legal))}
        for _ in range(n):
            counts[legal.index(agent.choose_non_king(obs, legal, history))] += 1
        p = 1 / len(legal)
        sigma = math.sqrt(p * (1 - p) / n)
        for c in counts.values():
            assert abs(c / n - p) < 4 * sigma

    def test_sampling_matches_softmax_of_scores(self, tiny_trained_model):
        torch.manual_seed(8)
        scorer = MoveScorer()
        agent = bind(RLAgent(tiny_trained_model, scorer), seed=13)
        state = new_game(GameConfig(seed=3))
        legal = legal_moves(state, Team.WHITE, TurnPhase.NON_KING_MOVE)
        history = state.history[Team.WHITE]
        action, logp, entropy = agent._decide(legal, history)
        rep = agent.learned.representation(history)
        feats = torch.from_numpy(move_features(legal, Team.WHITE, 8))
        with torch.no_grad():
            scores = scorer(torch.cat([rep.unsqueeze(0).expand(len(legal), -1), feats], dim=1))
        expected = torch.log_softmax(scores, dim=0)
        assert float(logp) == pytest.approx(float(expected[legal.index(action)]), abs=1e-6)
        probs = expected.exp()
        assert float(entropy) == pytest.approx(float(-(probs * expected).sum()), abs=1e-6)

    def test_logprobs_reproducible_for_fixed_rng(self, tiny_trained_model):
        scorer = MoveScorer()

        def run():
            agent = bind(RLAgent(tiny_trained_model, scorer), seed=21)
            state = new_game(GameConfig(seed=4))
            legal = legal_moves(state, Team.WHITE, TurnPhase.NON_KING_MOVE)
            history = state.history[Team.WHITE]
            return [agent._decide(legal, history)[1].item() for _ in range(5)]

        a, b = run(), run()
        assert a == b
        assert all(math.isfinite(x) for x in a)


class TestEntropySchedule:
    def test_endpoints_and_linearity(self):
        total = 2_000
        assert entropy_coefficient(0, total) == ENTROPY_COEF_START
        assert entropy_coefficient(total - 1, total) == ENTROPY_COEF_END
        mid = entropy_coefficient((total - 1) // 2, total)
        lo, hi = sorted((ENTROPY_COEF_START, ENTROPY_COEF_END))
        assert lo < mid < hi
        # linearity: equally spaced episodes give equally spaced coefficients
        a, b, c = (entropy_coefficient(e, total) for e in (100, 200, 300))
        assert b - a == pytest.approx(c - b, rel=1e-9)


class TestRLTraining:
    def test_mixture_weights_validated(self):
        with pytest.raises(ConfigError):
            RLTrainConfig(opponent_mixture=(("random", 0.5), ("vismax", 0.6)))
        with pytest.raises(ConfigError):
            RLTrainConfig(episodes=0)

    def test_micro_training_run_keeps_trunk_frozen(self, tiny_trained_model):
        before = trunk_hash(tiny_trained_model)
        config = GameConfig(turns_per_side=3)
        scorer, results = train_rl(
            tiny_trained_model,
            RLTrainConfig(episodes=2, batch_games=2),
            game_config=config,
            seed=1,
        )
        assert trunk_hash(tiny_trained_model) == before
        assert len(results) == 4  # 2 update batches of 2 games
        assert all(math.isfinite(r.learner_score) for r in results)

    def test_checkpoint_roundtrip(self, tiny_trained_model, tmp_path):
        torch.manual_seed(0)
        scorer = MoveScorer()
        path = tmp_path / "rl.npz"
        save_rl_checkpoint(path, scorer, tiny_trained_model, RLTrainConfig(episodes=10, batch_games=10))
        loaded = load_rl_checkpoint(path, tiny_trained_model)
        for a, b in zip(scorer.state_dict().values(), loaded.state_dict().values()):
            assert torch.equal(a, b)

    def test_checkpoint_rejects_wrong_trunk(self, tiny_trained_model, tmp_path):
        torch.manual_seed(1)
        scorer = MoveScorer()
        path = tmp_path / "rl.npz"
        save_rl_checkpoint(path, scorer, tiny_trained_model, RLTrainConfig(episodes=10, batch_games=10))
        other = BeliefModel()
        with pytest.raises(ModelError):
            load_rl_checkpoint(path, other)


class TestFullGamesWithModels:
    def test_all_agent_kinds_complete_a_game(self, tiny_trained_model):
        scorer = MoveScorer()
        agents = {
            "random": compose_heuristic("random"),
            "vismax": compose_heuristic("vismax"),
            "beliefmax": compose_heuristic("beliefmax", tiny_trained_model),
            "hidingvismax": compose_heuristic("hidingvismax", tiny_trained_model),
            "hidingbeliefmax": compose_heuristic("hidingbeliefmax", tiny_trained_model),
            "rl": RLAgent(tiny_trained_model, scorer),
        }
        config = GameConfig(turns_per_side=4, seed=31)
        opponent = compose_heuristic("random")
        for name, agent in agents.items():
            state, samples = play_game(agent, opponent, config, collect_metrics=True)
            assert state.game_over, name
            assert len(samples) == 8, name
            assert all(math.isfinite(s.observer_ce) for s in samples)
