// Client-side game view, built strictly from StateUpdate payloads.
// Nothing here guesses at fogged content: a cell is either visible with
// whatever the server listed on it, or fog.

import { allSquares, Phase, PieceView, StateUpdate, TeamName } from "./types.js";

export interface CellView {
  square: string;
  visible: boolean;
  piece: PieceView | null;
}

export interface ClientGameView {
  session: string;
  turn: number;
  yourTurnNumber: number;
  phase: Phase;
  toMove: TeamName;
  yourTeam: TeamName;
  yourScore: number | null;
  opponentScore: number | null;
  opponentScoreVisible: boolean;
  gameOver: boolean;
  cells: Map<string, CellView>;
}

export function buildView(update: StateUpdate): ClientGameView {
  const visible = new Set(update.your_view.visible);
  const cells = new Map<string, CellView>();
  for (const square of allSquares()) {
    cells.set(square, { square, visible: visible.has(square), piece: null });
  }
  for (const piece of update.your_view.pieces) {
    const cell = cells.get(piece.square);
    if (cell) {
      cell.piece = piece;
    }
  }
  return {
    session: update.session,
    turn: update.turn,
    yourTurnNumber: update.your_turn_number,
    phase: update.phase,
    toMove: update.to_move,
    yourTeam: update.your_team,
    yourScore: update.your_score,
    opponentScore: update.opponent_score,
    opponentScoreVisible: update.opponent_score_visible,
    gameOver: update.game_over,
    cells,
  };
}

export function visibleCount(view: ClientGameView): number {
  let n = 0;
  for (const cell of view.cells.values()) {
    if (cell.visible) n++;
  }
  return n;
}

export function isYourMovePhase(view: ClientGameView): boolean {
  return (
    !view.gameOver &&
    view.toMove === view.yourTeam &&
    (view.phase === "non_king_move" || view.phase === "king_move")
  );
}

export function isYourInferencePhase(view: ClientGameView): boolean {
  return !view.gameOver && view.toMove === view.yourTeam && view.phase === "inference";
}
