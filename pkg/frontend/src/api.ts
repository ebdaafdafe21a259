// HTTP client for the session server (a stateless request/response
// endpoint exists for every message type; see ws.ts for the persistent
// channel). The server URL is configurable.

import { ErrorMsg, WireMessage, WireMove } from "./types.js";

export class ApiError extends Error {
  constructor(public payload: ErrorMsg, public status: number) {
    super(payload.message);
  }
}

async function unwrap(response: Response): Promise<WireMessage[]> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(body as ErrorMsg, response.status);
  }
  return (body.messages ?? []) as WireMessage[];
}

export class ApiClient {
  constructor(public baseUrl: string) {}

  private url(path: string, params?: Record<string, string>): string {
    const u = new URL(path, this.baseUrl);
    for (const [k, v] of Object.entries(params ?? {})) {
      u.searchParams.set(k, v);
    }
    return u.toString();
  }

  async createSession(
    agent: string,
    humanTeam: string,
    seed?: number
  ): Promise<{ session: string; messages: WireMessage[] }> {
    const response = await fetch(this.url("/create-session"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ agent, human_team: humanTeam, ...(seed !== undefined ? { seed } : {}) }),
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(body as ErrorMsg, response.status);
    }
    return { session: body.session, messages: body.messages as WireMessage[] };
  }

  async state(session: string): Promise<WireMessage[]> {
    return unwrap(await fetch(this.url("/state", { session })));
  }

  async legalMoves(session: string): Promise<WireMessage[]> {
    return unwrap(await fetch(this.url("/legal-moves", { session })));
  }

  async submitMove(session: string, move: WireMove): Promise<WireMessage[]> {
    return unwrap(
      await fetch(this.url("/submit-move"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ session, ...move }),
      })
    );
  }

  async submitInference(session: string, payload: object): Promise<WireMessage[]> {
    return unwrap(
      await fetch(this.url("/submit-inference"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ session, ...payload }),
      })
    );
  }

  async record(session: string): Promise<string> {
    const response = await fetch(this.url("/record", { session }));
    if (!response.ok) {
      throw new ApiError((await response.json()) as ErrorMsg, response.status);
    }
    return response.text();
  }
}
