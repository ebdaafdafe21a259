// Persistent bidirectional channel speaking the same JSON frames as the
// HTTP endpoints. The app works over HTTP alone; this is the lower-latency
// alternative for live play.

import { WireMessage, WireMove } from "./types.js";

export class WsClient {
  private socket: WebSocket;
  private listeners: ((msg: WireMessage) => void)[] = [];

  constructor(baseUrl: string) {
    const url = new URL("/ws", baseUrl);
    url.protocol = url.protocol === "https:" ? "wss:" : "ws:";
    this.socket = new WebSocket(url.toString());
    this.socket.onmessage = (event) => {
      const msg = JSON.parse(event.data) as WireMessage;
      for (const fn of this.listeners) fn(msg);
    };
  }

  onMessage(fn: (msg: WireMessage) => void): void {
    this.listeners.push(fn);
  }

  ready(): Promise<void> {
    if (this.socket.readyState === WebSocket.OPEN) return Promise.resolve();
    return new Promise((resolve, reject) => {
      this.socket.onopen = () => resolve();
      this.socket.onerror = () => reject(new Error("websocket failed to connect"));
    });
  }

  private send(frame: object): void {
    this.socket.send(JSON.stringify(frame));
  }

  createSession(agent: string, humanTeam: string, seed?: number): void {
    this.send({ type: "create_session", agent, human_team: humanTeam, seed });
  }

  getState(session: string): void {
    this.send({ type: "get_state", session });
  }

  getLegalMoves(session: string): void {
    this.send({ type: "get_legal_moves", session });
  }

  submitMove(session: string, move: WireMove): void {
    this.send({ type: "submit_move", session, ...move });
  }

  submitInference(session: string, payload: object): void {
    this.send({ type: "submit_inference", session, ...payload });
  }

  close(): void {
    this.socket.close();
  }
}
