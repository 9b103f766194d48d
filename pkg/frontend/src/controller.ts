/**
 * Game-loop controller, free of DOM concerns so the contract suite can
 * drive it against a recorded transcript.
 *
 * Rendering is a callback fed with confirmed server snapshots only; the
 * controller never advances optimistically.  Machine seats move by
 * asking the server's analysis endpoint for the reference coalition (the
 * first human's team): members follow the winning policy, everyone else
 * plays best resistance against it.
 */

import { ApiClient, NewGameBody, SessionView, Analysis } from "./api.js";

export interface Snapshot {
  view: SessionView;
  legal: string[];
}

export interface ControllerOptions {
  onRender: (snapshot: Snapshot) => void;
}

export class GameController {
  private api: ApiClient;
  private onRender: (snapshot: Snapshot) => void;
  private gameId: string | null = null;
  private snapshot: Snapshot | null = null;
  private humanSeats: number[] = [];

  constructor(api: ApiClient, options: ControllerOptions) {
    this.api = api;
    this.onRender = options.onRender;
  }

  get current(): Snapshot | null {
    return this.snapshot;
  }

  /** "teamK" for the first human's team; team1 when every seat is a machine. */
  referenceCoalition(): string {
    const view = this.snapshot?.view;
    if (!view) {
      return "team1";
    }
    const seat = this.humanSeats.length > 0 ? Math.min(...this.humanSeats) : 1;
    for (let team = 0; team < view.alliances.length; team++) {
      if (view.alliances[team].includes(seat)) {
        return `team${team + 1}`;
      }
    }
    return "team1";
  }

  humanToMove(): boolean {
    const view = this.snapshot?.view;
    if (!view || view.finished || view.to_move === null) {
      return false;
    }
    return this.humanSeats.includes(view.to_move.player);
  }

  async start(body: NewGameBody): Promise<Snapshot> {
    const created = await this.api.newGame(body);
    this.gameId = created.id;
    this.humanSeats = body.human_players ?? [];
    return this.refresh();
  }

  async refresh(): Promise<Snapshot> {
    const id = this.requireGame();
    const view = await this.api.getGame(id);
    const legal = await this.api.legalMoves(id);
    this.snapshot = { view, legal: legal.moves };
    this.onRender(this.snapshot);
    return this.snapshot;
  }

  /** Post a human-picked move, stamped with the turn it was chosen at. */
  async playHuman(token: string): Promise<Snapshot> {
    const id = this.requireGame();
    const turn = this.snapshot?.view.turn;
    await this.api.postMove(id, token, turn);
    return this.refresh();
  }

  /** Ask the server to evaluate the reference coalition where it stands. */
  async hint(): Promise<Analysis> {
    const id = this.requireGame();
    return this.api.analysis(id, this.referenceCoalition());
  }

  /**
   * Advance one machine move; returns false when it is a human's turn or
   * the game is over.
   */
  async stepMachine(): Promise<boolean> {
    const snapshot = this.snapshot;
    if (!snapshot || snapshot.view.finished || this.humanToMove()) {
      return false;
    }
    const id = this.requireGame();
    const analysis = await this.api.analysis(id, this.referenceCoalition());
    const token = analysis.best_move ?? snapshot.legal[0];
    await this.api.postMove(id, token, snapshot.view.turn);
    await this.refresh();
    return true;
  }

  private requireGame(): string {
    if (this.gameId === null) {
      throw new Error("no game started");
    }
    return this.gameId;
  }
}
