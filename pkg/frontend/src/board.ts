// DOM board rendering and click-to-move input. Fogged squares are
// visually distinct; the human's side is always at the bottom. Move input
// pre-validates locally (one square in any direction, destination
// rendered empty) but the server stays authoritative.

import { ClientGameView } from "./state.js";
import { BOARD_SIZE, chebyshev, parseSquare, squareName, TeamName, WireMove } from "./types.js";

const GLYPHS: Record<TeamName, Record<string, string>> = {
  white: { pawn: "♙", rook: "♖", bishop: "♗", king: "♔" },
  black: { pawn: "♟", rook: "♜", bishop: "♝", king: "♚" },
};

export interface BoardHandlers {
  onSquareClick?: (square: string) => void;
}

export interface RenderOptions {
  selected?: string | null;
  highlights?: Set<string>;
  heat?: Map<string, number>;
  paintWeights?: Map<string, number>;
}

/** Render the 8x8 grid for the given view. Rank order flips so the
 * viewing team sits at the bottom of the board. */
export function renderBoard(
  container: HTMLElement,
  view: ClientGameView,
  handlers: BoardHandlers = {},
  options: RenderOptions = {}
): void {
  container.textContent = "";
  container.classList.add("board");
  const ranks = [...Array(BOARD_SIZE).keys()];
  const orientedRanks = view.yourTeam === "white" ? [...ranks].reverse() : ranks;
  for (const rank of orientedRanks) {
    for (let file = 0; file < BOARD_SIZE; file++) {
      const square = squareName(file, rank);
      const cell = view.cells.get(square)!;
      const el = document.createElement("div");
      el.className = "cell";
      el.dataset.square = square;
      el.classList.add((file + rank) % 2 === 0 ? "dark" : "light");
      el.classList.add(cell.visible ? "visible" : "fog");
      if (options.selected === square) el.classList.add("selected");
      if (options.highlights?.has(square)) el.classList.add("highlight");
      if (cell.piece) {
        el.textContent = GLYPHS[cell.piece.team][cell.piece.kind] ?? "?";
        el.classList.add("piece", `team-${cell.piece.team}`);
      }
      const heat = options.heat?.get(square) ?? 0;
      if (heat > 0) {
        const overlay = document.createElement("div");
        overlay.className = "heat";
        overlay.style.opacity = String(heatOpacity(heat));
        el.appendChild(overlay);
      }
      const weight = options.paintWeights?.get(square) ?? 0;
      if (weight > 0) {
        const badge = document.createElement("span");
        badge.className = "paint-weight";
        badge.textContent = String(weight);
        el.appendChild(badge);
      }
      if (handlers.onSquareClick) {
        el.addEventListener("click", () => handlers.onSquareClick!(square));
      }
      container.appendChild(el);
    }
  }
}

/** Heatmap opacity is proportional to belief mass (clamped to [0, 1]). */
export function heatOpacity(mass: number): number {
  return Math.max(0, Math.min(1, mass));
}

/** Client-side pre-validation of a click-pair move. Returns the wire move
 * or a reason string when the pair cannot be legal. */
export function validateMoveInput(
  view: ClientGameView,
  from: string,
  to: string
): WireMove | string {
  const fromCell = view.cells.get(from);
  const toCell = view.cells.get(to);
  if (!fromCell?.piece || fromCell.piece.team !== view.yourTeam) {
    return "select one of your own pieces first";
  }
  if (view.phase === "king_move" && fromCell.piece.kind !== "king") {
    return "this phase moves the king";
  }
  if (view.phase === "non_king_move" && fromCell.piece.kind === "king") {
    return "the king moves in the second phase";
  }
  if (chebyshev(from, to) !== 1) {
    return "moves cover exactly one square";
  }
  if (toCell?.piece) {
    return "destination is occupied";
  }
  const bounds = parseSquare(to);
  if (bounds.file < 0 || bounds.file >= BOARD_SIZE || bounds.rank < 0 || bounds.rank >= BOARD_SIZE) {
    return "destination is off the board";
  }
  return { piece: fromCell.piece.kind, from, to };
}

/** Rejection feedback: shake the board and highlight the legal moves the
 * server offered. */
export function showRejection(container: HTMLElement, legal: WireMove[] | undefined): Set<string> {
  container.classList.remove("shake");
  void container.offsetWidth; // restart the CSS animation
  container.classList.add("shake");
  const highlights = new Set<string>();
  for (const move of legal ?? []) {
    if (move.to) highlights.add(move.to);
  }
  return highlights;
}
