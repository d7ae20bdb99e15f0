// Thin typed client for the bidgames HTTP service.

import type {
  ApiErrorBody,
  CreateSessionRequest,
  PlayerName,
  SessionDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(this.base + path, {
      method,
      headers: body !== undefined ? { "content-type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (!res.ok) {
      let code = `http_${res.status}`;
      let message = res.statusText;
      try {
        const err = (await res.json()) as ApiErrorBody;
        code = err.code ?? code;
        message = err.message ?? message;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(res.status, code, message);
    }
    return (await res.json()) as T;
  }

  createSession(req: CreateSessionRequest): Promise<SessionDoc> {
    return this.request("POST", "/sessions", req);
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request("GET", `/sessions/${id}`);
  }

  bid(id: string, player: PlayerName, bid: number): Promise<SessionDoc> {
    return this.request("POST", `/sessions/${id}/bid`, { player, bid });
  }

  resolveTie(id: string, player: PlayerName, selfWin: boolean): Promise<SessionDoc> {
    return this.request("POST", `/sessions/${id}/tie`, { player, self_win: selfWin });
  }

  move(
    id: string,
    player: PlayerName,
    action: { election: "self" | "force_opponent"; move?: number; cell?: number },
  ): Promise<SessionDoc> {
    return this.request("POST", `/sessions/${id}/move`, { player, ...action });
  }
}
