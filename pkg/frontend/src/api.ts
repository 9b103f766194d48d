/**
 * Typed client for the game server API.
 *
 * The client is a thin transport: no rule logic lives here, every
 * decision comes back from the server.  Errors carry the server's
 * message verbatim so the UI can surface it unchanged.
 */

export interface StateJson {
  n: number;
  counts: number[];
}

export interface Seat {
  player: number;
  team: number;
}

export interface SessionView {
  id: string;
  n: number;
  players: number;
  alliances: number[][];
  human_players: number[];
  state: StateJson;
  turn: number;
  to_move: Seat | null;
  finished: boolean;
  winner: Seat | null;
  moves: string[];
  created_at: string;
  updated_at: string;
}

export interface CreatedGame {
  id: string;
  state: StateJson;
  to_move: Seat | null;
}

export interface LegalMoves {
  moves: string[];
}

export interface Analysis {
  coalition: number[];
  win: boolean;
  best_move: string | null;
  finished: boolean;
}

export interface NewGameBody {
  n: number;
  players: number;
  alliances?: number[][];
  human_players?: number[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly field?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl?: FetchLike) {
    this.base = base;
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  newGame(body: NewGameBody): Promise<CreatedGame> {
    return this.request<CreatedGame>("POST", "/games", body);
  }

  getGame(id: string): Promise<SessionView> {
    return this.request<SessionView>("GET", `/games/${id}`);
  }

  legalMoves(id: string): Promise<LegalMoves> {
    return this.request<LegalMoves>("GET", `/games/${id}/legal`);
  }

  postMove(id: string, move: string, turn?: number): Promise<SessionView> {
    const body: { move: string; turn?: number } = { move };
    if (turn !== undefined) {
      body.turn = turn;
    }
    return this.request<SessionView>("POST", `/games/${id}/moves`, body);
  }

  analysis(id: string, coalition: string): Promise<Analysis> {
    return this.request<Analysis>(
      "GET",
      `/games/${id}/analysis?coalition=${encodeURIComponent(coalition)}`,
    );
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const error = payload?.error ?? {};
      throw new ApiError(
        response.status,
        error.message ?? `request failed with status ${response.status}`,
        error.field,
      );
    }
    return payload as T;
  }
}
