// App wiring: session form, live board with the three per-turn inputs
// (non-king move, king move, inference), score panel, and the replay
// viewer with oracle overlay once the game ends.

import { ApiClient, ApiError } from "./api.js";
import { renderBoard, showRejection, validateMoveInput } from "./board.js";
import { InferenceInput } from "./inference.js";
import { frameAt, parseRecord, ReplayData } from "./replay.js";
import { buildView, CellView, ClientGameView, isYourInferencePhase, isYourMovePhase } from "./state.js";
import { allSquares, GameOver, StateUpdate, TeamName, WireMessage } from "./types.js";

interface AppState {
  api: ApiClient;
  session: string | null;
  view: ClientGameView | null;
  selected: string | null;
  highlights: Set<string>;
  inference: InferenceInput;
  gameOver: GameOver | null;
  replay: ReplayData | null;
  replayIndex: number;
  replayFogTeam: TeamName | "none";
}

const state: AppState = {
  api: new ApiClient(defaultServerUrl()),
  session: null,
  view: null,
  selected: null,
  highlights: new Set(),
  inference: new InferenceInput(),
  gameOver: null,
  replay: null,
  replayIndex: 0,
  replayFogTeam: "none",
};

function defaultServerUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("server") ?? window.location.origin;
}

function byId<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function setStatus(text: string): void {
  byId("status").textContent = text;
}

function consume(messages: WireMessage[]): void {
  for (const msg of messages) {
    switch (msg.type) {
      case "state_update":
        state.view = buildView(msg as StateUpdate);
        state.selected = null;
        state.highlights.clear();
        break;
      case "legal_moves":
        state.highlights = new Set((msg.moves ?? []).flatMap((m) => (m.to ? [m.to] : [])));
        break;
      case "turn_result":
        setStatus(
          msg.score_delta === null
            ? "inference recorded"
            : `inference scored ${msg.score_delta.toFixed(3)}`
        );
        break;
      case "game_over": {
        state.gameOver = msg as GameOver;
        state.replay = parseRecord(state.gameOver.record_jsonl);
        state.replayIndex = state.replay.turns.length;
        const slider = byId<HTMLInputElement>("replay-slider");
        slider.max = String(state.replay.turns.length);
        slider.value = String(state.replayIndex);
        setStatus(
          `game over: white ${msg.final_scores.white.toFixed(2)}, ` +
            `black ${msg.final_scores.black.toFixed(2)} (${msg.winner})`
        );
        break;
      }
      case "error":
        setStatus(`error: ${msg.message}`);
        break;
    }
  }
  render();
}

async function refreshState(): Promise<void> {
  if (!state.session) return;
  consume(await state.api.state(state.session));
}

async function handleSquareClick(square: string): Promise<void> {
  const view = state.view;
  if (!view || !state.session) return;
  if (isYourInferencePhase(view)) {
    if (state.inference.mode === "paint") {
      state.inference.addWeight(square);
      render();
    } else {
      await submitInference(square);
    }
    return;
  }
  if (!isYourMovePhase(view)) return;
  if (state.selected === null) {
    state.selected = square;
    render();
    return;
  }
  const from = state.selected;
  state.selected = null;
  const move = validateMoveInput(view, from, square);
  if (typeof move === "string") {
    setStatus(move);
    render();
    return;
  }
  try {
    consume(await state.api.submitMove(state.session, move));
  } catch (err) {
    if (err instanceof ApiError) {
      state.highlights = showRejection(byId("board"), err.payload.legal_moves);
      setStatus(err.payload.message);
      render();
    } else {
      throw err;
    }
  }
}

async function submitInference(singleSquare: string | null): Promise<void> {
  if (!state.session) return;
  const payload = state.inference.payload(singleSquare);
  if (!payload) {
    setStatus("select at least one square for the inference");
    return;
  }
  try {
    const messages = await state.api.submitInference(state.session, payload);
    state.inference.reset();
    consume(messages);
  } catch (err) {
    if (err instanceof ApiError) setStatus(err.payload.message);
    else throw err;
  }
}

async function submitPass(): Promise<void> {
  if (!state.session) return;
  try {
    consume(await state.api.submitMove(state.session, { pass: true }));
  } catch (err) {
    if (err instanceof ApiError) setStatus(err.payload.message);
    else throw err;
  }
}

async function createSession(): Promise<void> {
  const agent = byId<HTMLInputElement>("agent-spec").value || "random";
  const team = byId<HTMLSelectElement>("team-choice").value;
  const seedRaw = byId<HTMLInputElement>("seed").value;
  state.api = new ApiClient(byId<HTMLInputElement>("server-url").value || defaultServerUrl());
  try {
    const { session, messages } = await state.api.createSession(
      agent,
      team,
      seedRaw ? Number(seedRaw) : undefined
    );
    state.session = session;
    state.gameOver = null;
    state.replay = null;
    state.inference.reset();
    setStatus(`session ${session.slice(0, 8)} started vs ${agent}`);
    consume(messages);
  } catch (err) {
    if (err instanceof ApiError) setStatus(err.payload.message);
    else setStatus(String(err));
  }
}

function renderScores(view: ClientGameView): void {
  const score = (value: number | null) => (value === null ? "hidden" : value.toFixed(3));
  byId("score-panel").textContent =
    `you (${view.yourTeam}): ${score(view.yourScore)} | opponent: ` +
    (view.opponentScoreVisible ? score(view.opponentScore) : "hidden");
  byId("phase-panel").textContent = view.gameOver
    ? "game over"
    : `turn ${view.yourTurnNumber} | phase: ${view.phase.replace(/_/g, " ")} | to move: ${view.toMove}`;
}

function render(): void {
  const boardEl = byId("board");
  const replayOn = state.replay !== null && byId<HTMLInputElement>("replay-toggle").checked;
  byId("replay-controls").style.display = state.replay ? "block" : "none";
  if (replayOn) {
    renderReplay(boardEl);
    return;
  }
  const view = state.view;
  if (!view) return;
  renderScores(view);
  const paintWeights = new Map<string, number>();
  for (const sq of view.cells.keys()) {
    const w = state.inference.weightOf(sq);
    if (w > 0) paintWeights.set(sq, w);
  }
  renderBoard(boardEl, view, { onSquareClick: (sq) => void handleSquareClick(sq) }, {
    selected: state.selected,
    highlights: state.highlights,
    paintWeights,
  });
  byId("inference-controls").style.display = isYourInferencePhase(view) ? "block" : "none";
  byId("move-controls").style.display = isYourMovePhase(view) ? "block" : "none";
}

function renderReplay(boardEl: HTMLElement): void {
  const replay = state.replay!;
  const frame = frameAt(replay, state.replayIndex);
  const yourTeam = (state.gameOver?.your_team ?? "white") as TeamName;
  const cells = new Map<string, CellView>();
  for (const square of allSquares()) {
    const piece = frame.position.get(square) ?? null;
    const visible = state.replayFogTeam === "none" || frame.fog[state.replayFogTeam].has(square);
    cells.set(square, {
      square,
      visible,
      piece: piece ? { kind: piece.kind, team: piece.team, square } : null,
    });
  }
  const view: ClientGameView = {
    session: state.session ?? "",
    turn: frame.halfTurn,
    yourTurnNumber: Math.ceil(frame.halfTurn / 2),
    phase: "inference",
    toMove: frame.actor ?? "white",
    yourTeam,
    yourScore: frame.scores[yourTeam],
    opponentScore: frame.scores[yourTeam === "white" ? "black" : "white"],
    opponentScoreVisible: true,
    gameOver: true,
    cells,
  };
  const highlights = new Set<string>();
  if (frame.trueOpponentKing) highlights.add(frame.trueOpponentKing);
  renderBoard(boardEl, view, {}, { heat: frame.belief ?? undefined, highlights });
  byId("phase-panel").textContent =
    `replay: half-turn ${frame.halfTurn}/${replay.turns.length}` +
    (frame.actor ? ` | ${frame.actor} inferred` : "") +
    (frame.trueOpponentKing ? ` | true king: ${frame.trueOpponentKing}` : "");
  byId("score-panel").textContent =
    `white ${frame.scores.white.toFixed(3)} | black ${frame.scores.black.toFixed(3)}`;
}

export function initApp(): void {
  byId("create-session").addEventListener("click", () => void createSession());
  byId("refresh").addEventListener("click", () => void refreshState());
  byId("pass-move").addEventListener("click", () => void submitPass());
  byId("submit-paint").addEventListener("click", () => void submitInference(null));
  byId<HTMLSelectElement>("inference-mode").addEventListener("change", (ev) => {
    state.inference.mode = (ev.target as HTMLSelectElement).value as "single" | "paint";
    state.inference.reset();
    render();
  });
  byId<HTMLInputElement>("replay-toggle").addEventListener("change", render);
  byId<HTMLInputElement>("replay-slider").addEventListener("input", (ev) => {
    state.replayIndex = Number((ev.target as HTMLInputElement).value);
    render();
  });
  byId<HTMLSelectElement>("replay-fog").addEventListener("change", (ev) => {
    state.replayFogTeam = (ev.target as HTMLSelectElement).value as TeamName | "none";
    render();
  });
  setStatus("create a session to start");
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  initApp();
}
