// Wire schema shared with the session server. Every server frame carries
// `type` and `protocol_version`; the client never derives board content
// from anything but these payloads while a game is live.

export type Phase = "non_king_move" | "king_move" | "inference";
export type TeamName = "white" | "black";

export interface PieceView {
  kind: string;
  team: TeamName;
  square: string;
}

export interface ObservationView {
  viewer: TeamName;
  turn: number;
  visible: string[];
  pieces: PieceView[];
}

export interface WireMove {
  piece?: string;
  from?: string;
  to?: string;
  pass?: boolean;
}

export interface StateUpdate {
  type: "state_update";
  protocol_version: number;
  session: string;
  turn: number;
  your_turn_number: number;
  phase: Phase;
  to_move: TeamName;
  your_team: TeamName;
  your_view: ObservationView;
  your_score: number | null;
  opponent_score_visible: boolean;
  opponent_score: number | null;
  game_over: boolean;
}

export interface LegalMovesMsg {
  type: "legal_moves";
  protocol_version: number;
  session: string;
  phase: Phase;
  moves: WireMove[];
}

export interface TurnResult {
  type: "turn_result";
  protocol_version: number;
  session: string;
  turn: number;
  score_delta: number | null;
}

export interface GameOver {
  type: "game_over";
  protocol_version: number;
  session: string;
  final_scores: Record<TeamName, number>;
  winner: string;
  your_team: TeamName;
  seed: number;
  record_jsonl: string;
}

export interface ErrorMsg {
  type: "error";
  protocol_version: number;
  code: string;
  message: string;
  legal_moves?: WireMove[];
}

export type WireMessage = StateUpdate | LegalMovesMsg | TurnResult | GameOver | ErrorMsg;

export const BOARD_SIZE = 8;

export function squareName(file: number, rank: number): string {
  return String.fromCharCode(97 + file) + String(rank + 1);
}

export function parseSquare(name: string): { file: number; rank: number } {
  return { file: name.charCodeAt(0) - 97, rank: parseInt(name.slice(1), 10) - 1 };
}

export function chebyshev(a: string, b: string): number {
  const pa = parseSquare(a);
  const pb = parseSquare(b);
  return Math.max(Math.abs(pa.file - pb.file), Math.abs(pa.rank - pb.rank));
}

export function allSquares(): string[] {
  const out: string[] = [];
  for (let rank = 0; rank < BOARD_SIZE; rank++) {
    for (let file = 0; file < BOARD_SIZE; file++) {
      out.push(squareName(file, rank));
    }
  }
  return out;
}
