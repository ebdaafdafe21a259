// Replay viewer model: parse a finished game's JSONL record, step through
// half-turns, and expose per-turn board positions, beliefs (heatmap
// input), true king squares, and either player's recomputed historical
// fog. Replay runs after game over with the oracle record in hand, so
// recomputing visibility locally reveals nothing it should not.

import { BOARD_SIZE, parseSquare, squareName, TeamName, WireMove } from "./types.js";

export interface RecordTurn {
  team: TeamName;
  nonKingMove: WireMove;
  kingMove: WireMove;
  belief: number[];
  trueOpponentKing: string;
  scoreDelta: number;
}

export interface ReplayData {
  engineVersion: string;
  boardSize: number;
  kingStarts: Record<TeamName, string>;
  rosters: Record<TeamName, [string, string][]>;
  turns: RecordTurn[];
  finalScores: Record<TeamName, number>;
  seed: number;
}

export interface BoardPiece {
  kind: string;
  team: TeamName;
}

export type Position = Map<string, BoardPiece>;

function parseMove(data: any): WireMove {
  if (data.pass) return { pass: true };
  return { piece: data.piece, from: data.from, to: data.to };
}

export function parseRecord(jsonl: string): ReplayData {
  const lines = jsonl.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length < 2) {
    throw new Error("record is truncated");
  }
  const header = JSON.parse(lines[0]);
  const footer = JSON.parse(lines[lines.length - 1]);
  if (!footer.final_scores) {
    throw new Error("record is missing its final-scores footer");
  }
  const turns: RecordTurn[] = lines.slice(1, -1).map((line) => {
    const data = JSON.parse(line);
    return {
      team: data.team,
      nonKingMove: parseMove(data.non_king_move),
      kingMove: parseMove(data.king_move),
      belief: data.belief,
      trueOpponentKing: data.true_opponent_king,
      scoreDelta: data.score_delta,
    };
  });
  return {
    engineVersion: header.engine_version,
    boardSize: header.config.board_size ?? BOARD_SIZE,
    kingStarts: header.king_starts,
    rosters: header.config.rosters,
    turns,
    finalScores: footer.final_scores,
    seed: header.config.seed,
  };
}

export function initialPosition(data: ReplayData): Position {
  const position: Position = new Map();
  for (const team of ["white", "black"] as TeamName[]) {
    for (const [kind, square] of data.rosters[team]) {
      position.set(square, { kind, team });
    }
    position.set(data.kingStarts[team], { kind: "king", team });
  }
  return position;
}

function applyMove(position: Position, move: WireMove): void {
  if (move.pass || !move.from || !move.to) return;
  const piece = position.get(move.from);
  if (!piece) throw new Error(`no piece on ${move.from}`);
  position.delete(move.from);
  position.set(move.to, piece);
}

/** Board position after the first `halfTurns` half-turns. */
export function positionAfter(data: ReplayData, halfTurns: number): Position {
  const position = initialPosition(data);
  for (const turn of data.turns.slice(0, halfTurns)) {
    applyMove(position, turn.nonKingMove);
    applyMove(position, turn.kingMove);
  }
  return position;
}

/** Cumulative scores after the first `halfTurns` half-turns. */
export function scoresAfter(data: ReplayData, halfTurns: number): Record<TeamName, number> {
  const scores: Record<TeamName, number> = { white: 0, black: 0 };
  for (const turn of data.turns.slice(0, halfTurns)) {
    scores[turn.team] += turn.scoreDelta;
  }
  return scores;
}

const ORTHO = [
  [1, 0],
  [-1, 0],
  [0, 1],
  [0, -1],
];
const DIAG = [
  [1, 1],
  [1, -1],
  [-1, 1],
  [-1, -1],
];

/** Recompute a team's visibility for a historical position: every piece
 * sees its own square and Chebyshev-1 ring; rooks and bishops cast rays
 * that end inclusively at enemy pawns (other pieces are transparent). */
export function visibilityOf(position: Position, team: TeamName): Set<string> {
  const size = BOARD_SIZE;
  const visible = new Set<string>();
  const enemyPawns = new Set<string>();
  for (const [square, piece] of position) {
    if (piece.team !== team && piece.kind === "pawn") enemyPawns.add(square);
  }
  for (const [square, piece] of position) {
    if (piece.team !== team) continue;
    const { file, rank } = parseSquare(square);
    for (let df = -1; df <= 1; df++) {
      for (let dr = -1; dr <= 1; dr++) {
        const nf = file + df;
        const nr = rank + dr;
        if (nf >= 0 && nf < size && nr >= 0 && nr < size) {
          visible.add(squareName(nf, nr));
        }
      }
    }
    const rays = piece.kind === "rook" ? ORTHO : piece.kind === "bishop" ? DIAG : [];
    for (const [df, dr] of rays) {
      let nf = file + df;
      let nr = rank + dr;
      while (nf >= 0 && nf < size && nr >= 0 && nr < size) {
        const sq = squareName(nf, nr);
        visible.add(sq);
        if (enemyPawns.has(sq)) break;
        nf += df;
        nr += dr;
      }
    }
  }
  return visible;
}

/** Heatmap input for one half-turn's belief: square -> mass. */
export function beliefHeatmap(turn: RecordTurn): Map<string, number> {
  const heat = new Map<string, number>();
  turn.belief.forEach((mass, index) => {
    if (mass > 0) {
      heat.set(squareName(index % BOARD_SIZE, Math.floor(index / BOARD_SIZE)), mass);
    }
  });
  return heat;
}

export interface ReplayFrame {
  halfTurn: number;
  position: Position;
  scores: Record<TeamName, number>;
  actor: TeamName | null;
  belief: Map<string, number> | null;
  trueOpponentKing: string | null;
  fog: Record<TeamName, Set<string>>;
}

/** Frame `index` in [0, turns]: 0 is the initial position; frame k shows
 * the board after half-turn k with that half-turn's inference overlay. */
export function frameAt(data: ReplayData, index: number): ReplayFrame {
  const halfTurn = Math.max(0, Math.min(index, data.turns.length));
  const position = positionAfter(data, halfTurn);
  const turn = halfTurn > 0 ? data.turns[halfTurn - 1] : null;
  return {
    halfTurn,
    position,
    scores: scoresAfter(data, halfTurn),
    actor: turn?.team ?? null,
    belief: turn ? beliefHeatmap(turn) : null,
    trueOpponentKing: turn?.trueOpponentKing ?? null,
    fog: {
      white: visibilityOf(position, "white"),
      black: visibilityOf(position, "black"),
    },
  };
}
