// Live-server conformance: spawn the Python session server and drive full
// games through the HTTP client exactly as the browser app would.
// Requires the python package installed (pip install -e ..); set
// RUN_PROTOCOL_TESTS=0 to skip explicitly.

import { spawn, ChildProcess } from "node:child_process";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { parseRecord, scoresAfter } from "../src/replay.js";
import { allSquares, GameOver, LegalMovesMsg, StateUpdate, WireMessage } from "../src/types.js";

const PORT = 8137 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;
const SKIP = process.env.RUN_PROTOCOL_TESTS === "0";

let server: ChildProcess | null = null;

async function serverReady(timeoutMs = 60_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/state?session=probe`);
      if (r.status === 410) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("server did not come up");
}

beforeAll(async () => {
  if (SKIP) return;
  server = spawn(
    "python3",
    ["-m", "infochess.harness.cli", "serve", "--port", String(PORT), "--host", "127.0.0.1"],
    { stdio: "ignore" }
  );
  await serverReady();
});

afterAll(() => {
  server?.kill("SIGTERM");
});

function firstOfType<T extends WireMessage>(messages: WireMessage[], type: string): T {
  const found = messages.find((m) => m.type === type);
  if (!found) throw new Error(`no ${type} in ${messages.map((m) => m.type).join(",")}`);
  return found as T;
}

function assertNoLeak(message: WireMessage): void {
  if (message.type !== "state_update") return;
  const update = message as StateUpdate;
  const visible = new Set(update.your_view.visible);
  for (const piece of update.your_view.pieces) {
    if (piece.team !== update.your_team) {
      expect(visible.has(piece.square)).toBe(true);
    }
  }
}

interface DriveResult {
  gameOver: GameOver;
  paintedTurn: number | null;
  messages: WireMessage[];
}

/** Play a complete game with random legal choices; on the first inference
 * paint a 1:3 belief over two fogged squares, afterwards use the
 * single-square shortcut. */
async function driveGame(api: ApiClient, seed: number, paint: boolean): Promise<DriveResult> {
  const created = await api.createSession("random", "white", seed);
  const session = created.session;
  const messages: WireMessage[] = [...created.messages];
  let paintedTurn: number | null = null;
  for (let turn = 0; turn < 100; turn++) {
    const stateMsgs = await api.state(session);
    messages.push(...stateMsgs);
    const current = stateMsgs[0];
    if (current.type === "game_over") {
      return { gameOver: current as GameOver, paintedTurn, messages };
    }
    for (const phase of ["non_king_move", "king_move"]) {
      const legal = firstOfType<LegalMovesMsg>(await api.legalMoves(session), "legal_moves");
      expect(legal.phase).toBe(phase);
      const move = legal.moves[turn % legal.moves.length];
      messages.push(...(await api.submitMove(session, move)));
    }
    const view = firstOfType<StateUpdate>(await api.state(session), "state_update");
    messages.push(view);
    const visible = new Set(view.your_view.visible);
    const fogged = allSquares().filter((sq) => !visible.has(sq));
    let result: WireMessage[];
    if (paint && paintedTurn === null && fogged.length >= 2) {
      const belief = new Array(64).fill(0);
      const indexOf = (name: string) =>
        (name.charCodeAt(1) - 49) * 8 + (name.charCodeAt(0) - 97);
      belief[indexOf(fogged[0])] = 0.25;
      belief[indexOf(fogged[1])] = 0.75;
      result = await api.submitInference(session, { belief });
      paintedTurn = view.turn;
    } else {
      result = await api.submitInference(session, {
        single_square: fogged[0] ?? view.your_view.visible[0],
      });
    }
    messages.push(...result);
    const over = result.find((m) => m.type === "game_over");
    if (over) {
      return { gameOver: over as GameOver, paintedTurn, messages };
    }
  }
  throw new Error("game never ended");
}

describe.skipIf(SKIP)("protocol conformance against a live server", () => {
  it("drives a full 25-turn game and the painted 1:3 belief arrives as 0.25/0.75", async () => {
    const api = new ApiClient(BASE);
    const { gameOver, paintedTurn, messages } = await driveGame(api, 7001, true);
    for (const m of messages) assertNoLeak(m);

    const record = parseRecord(gameOver.record_jsonl);
    expect(record.turns.length).toBe(50); // 25 per side
    expect(paintedTurn).not.toBeNull();

    // the human is white: its half-turns are the even entries
    const painted = record.turns[paintedTurn!];
    expect(painted.team).toBe("white");
    const nonzero = painted.belief.filter((p) => p > 0).sort((a, b) => a - b);
    expect(nonzero.length).toBe(2);
    expect(Math.abs(nonzero[0] - 0.25)).toBeLessThan(1e-6);
    expect(Math.abs(nonzero[1] - 0.75)).toBeLessThan(1e-6);
  });

  it("replay viewer final scores equal the game-over payload", async () => {
    const api = new ApiClient(BASE);
    const { gameOver } = await driveGame(api, 7002, false);
    const record = parseRecord(gameOver.record_jsonl);
    const replayed = scoresAfter(record, record.turns.length);
    expect(replayed.white).toBeCloseTo(gameOver.final_scores.white, 9);
    expect(replayed.black).toBeCloseTo(gameOver.final_scores.black, 9);
    // and the server's record endpoint serves the same bytes
    const served = await api.record(gameOver.session);
    expect(served).toBe(gameOver.record_jsonl);
  });

  it("rejections carry the legal move list and leave state unchanged", async () => {
    const api = new ApiClient(BASE);
    const created = await api.createSession("random", "white", 7003);
    await expect(api.submitMove(created.session, { from: "a1", to: "a8" })).rejects.toSatisfy(
      (err: unknown) => {
        expect(err).toBeInstanceOf(ApiError);
        const apiErr = err as ApiError;
        expect(apiErr.status).toBe(409);
        expect(apiErr.payload.legal_moves?.length).toBeGreaterThan(0);
        return true;
      }
    );
    const state = firstOfType<StateUpdate>(await api.state(created.session), "state_update");
    expect(state.phase).toBe("non_king_move");
    expect(state.turn).toBe(0);
  });
});
