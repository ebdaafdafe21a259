import { StateUpdate } from "../src/types.js";

export function stateUpdate(overrides: Partial<StateUpdate> = {}): StateUpdate {
  return {
    type: "state_update",
    protocol_version: 1,
    session: "s1",
    turn: 0,
    your_turn_number: 0,
    phase: "non_king_move",
    to_move: "white",
    your_team: "white",
    your_view: {
      viewer: "white",
      turn: 0,
      visible: ["a1", "a2", "b1", "b2", "c1", "d4"],
      pieces: [
        { kind: "king", team: "white", square: "a1" },
        { kind: "rook", team: "white", square: "b1" },
        { kind: "pawn", team: "black", square: "d4" },
      ],
    },
    your_score: 0.5,
    opponent_score_visible: true,
    opponent_score: 0.25,
    game_over: false,
    ...overrides,
  };
}
