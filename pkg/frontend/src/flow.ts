// Session flow controller: phase gating and the sealed-bid two-step.
//
// The controller owns the latest server document and derives exactly which
// controls may be shown, mirroring the server's state machine so the UI
// never submits an action the server would refuse for phase reasons.
// Sealed bids use commit-then-reveal: on a shared screen the first
// player's committed amount stays hidden until both have committed (the
// server holds it; the client only tracks WHO has committed).

import { ApiClient, ApiError } from "./api.js";
import type { PlayerName, SessionDoc } from "./types.js";

export type Controls = {
  /** players whose sealed-bid entry is open right now */
  bidEntry: PlayerName[];
  /** holder who must answer the tie dialog (exactly two choices) */
  tieDialog: PlayerName | null;
  /** bid winner's election control; shown only when both options are legal */
  electionChoice: PlayerName | null;
  /** mover who must pick a move/cell (election implied when single option) */
  moveInput: PlayerName | null;
  finished: boolean;
};

export function deriveControls(doc: SessionDoc): Controls {
  const s = doc.state;
  const ai = new Set(doc.config.ai_controls);
  const humans = (["alice", "bob"] as PlayerName[]).filter((p) => !ai.has(p));
  const controls: Controls = {
    bidEntry: [],
    tieDialog: null,
    electionChoice: null,
    moveInput: null,
    finished: s.phase === "finished",
  };
  if (s.phase === "awaiting_bids") {
    controls.bidEntry = humans.filter((p) => !s.bids_submitted.includes(p));
  } else if (s.phase === "awaiting_tie_choice") {
    if (s.actor && !ai.has(s.actor)) controls.tieDialog = s.actor;
  } else if (s.phase === "awaiting_election") {
    if (s.actor && !ai.has(s.actor)) {
      const elections = doc.legal.elections ?? [];
      if (elections.length > 1) {
        controls.electionChoice = s.actor;
      } else if (elections.includes("self")) {
        controls.moveInput = s.actor; // only moving is legal: skip the choice
      } else {
        controls.electionChoice = s.actor; // force is the only option
      }
    }
  } else if (s.phase === "awaiting_move") {
    if (s.actor && !ai.has(s.actor)) controls.moveInput = s.actor;
  }
  return controls;
}

export function chipLine(doc: SessionDoc, player: PlayerName): string {
  const s = doc.state;
  const amount = player === "alice" ? s.alice : s.bob;
  return s.advantage === player ? `${amount}*` : `${amount}`;
}

/** Totals shown must always sum to k. */
export function chipsInvariantHolds(doc: SessionDoc): boolean {
  return doc.state.alice + doc.state.bob === doc.config.k;
}

export type FlowListener = (doc: SessionDoc, controls: Controls) => void;

export class SessionFlow {
  doc: SessionDoc | null = null;
  lastError: ApiError | null = null;
  private listeners: FlowListener[] = [];
  /** local record of which seat committed on a shared screen */
  committed: Set<PlayerName> = new Set();
  private pendingElection: PlayerName | null = null;

  constructor(private api: ApiClient) {}

  onChange(fn: FlowListener): void {
    this.listeners.push(fn);
  }

  private update(doc: SessionDoc): SessionDoc {
    this.doc = doc;
    this.lastError = null;
    if (doc.state.phase !== "awaiting_bids") this.committed.clear();
    if (doc.state.phase !== "awaiting_election" && doc.state.phase !== "awaiting_move") {
      this.pendingElection = null;
    }
    const controls = this.controls();
    for (const fn of this.listeners) fn(doc, controls);
    return doc;
  }

  controls(): Controls {
    if (!this.doc) throw new Error("no session yet");
    const controls = deriveControls(this.doc);
    if (this.pendingElection && controls.electionChoice === this.pendingElection) {
      // The human already elected "self"; only the move remains.
      controls.electionChoice = null;
      controls.moveInput = this.pendingElection;
    }
    return controls;
  }

  private async guard<T extends SessionDoc>(call: () => Promise<T>): Promise<SessionDoc> {
    try {
      return this.update(await call());
    } catch (e) {
      if (e instanceof ApiError) {
        this.lastError = e; // surfaced verbatim with retry by the view
        if (this.doc) this.update(this.doc);
        throw e;
      }
      throw e;
    }
  }

  async create(req: Parameters<ApiClient["createSession"]>[0]): Promise<SessionDoc> {
    return this.guard(() => this.api.createSession(req));
  }

  async refresh(): Promise<SessionDoc> {
    if (!this.doc) throw new Error("no session yet");
    return this.guard(() => this.api.getSession(this.doc!.id));
  }

  async commitBid(player: PlayerName, amount: number): Promise<SessionDoc> {
    if (!this.controls().bidEntry.includes(player)) {
      throw new Error(`bid entry is not open for ${player}`);
    }
    this.committed.add(player);
    return this.guard(() => this.api.bid(this.doc!.id, player, amount));
  }

  async answerTie(selfWin: boolean): Promise<SessionDoc> {
    const holder = this.controls().tieDialog;
    if (!holder) throw new Error("no tie to answer");
    return this.guard(() => this.api.resolveTie(this.doc!.id, holder, selfWin));
  }

  /** Election step of the two-part election control. */
  elect(choice: "self" | "force_opponent"): Promise<SessionDoc> | void {
    const who = this.controls().electionChoice;
    if (!who) throw new Error("no election to make");
    if (choice === "force_opponent") {
      return this.guard(() => this.api.move(this.doc!.id, who, { election: "force_opponent" }));
    }
    // Electing self only opens the move input; nothing is sent yet.
    this.pendingElection = who;
    this.update(this.doc!);
  }

  async submitMove(target: { cell?: number; move?: number }): Promise<SessionDoc> {
    const who = this.controls().moveInput;
    if (!who) throw new Error("no move input open");
    return this.guard(() =>
      this.api.move(this.doc!.id, who, { election: "self", ...target }),
    );
  }
}
