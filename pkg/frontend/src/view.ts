// DOM rendering: create form, play screen, dialogs, history, end screen.

import type { Controls } from "./flow.js";
import { SessionFlow, chipLine, chipsInvariantHolds } from "./flow.js";
import type { PlayerName, SessionDoc, SessionEvent } from "./types.js";

const PLAYER_LABEL: Record<PlayerName, string> = { alice: "Alice", bob: "Bob" };

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    if (k === "class") node.className = v;
    else node.setAttribute(k, v);
  }
  node.append(...children);
  return node;
}

export function describeEvent(ev: SessionEvent): string {
  switch (ev.type) {
    case "bids":
      return `bids revealed: Alice ${ev.alice}, Bob ${ev.bob}`;
    case "tie_choice":
      return `${PLAYER_LABEL[ev.holder]} ${ev.self_win ? "uses the advantage" : "keeps the advantage and passes the bid"}`;
    case "tie_auto":
      return `tie resolved by rule: ${PLAYER_LABEL[ev.winner]} wins the bid`;
    case "election":
      return `${PLAYER_LABEL[ev.by]} ${ev.election === "self" ? "moves" : "forces the opponent to move"}`;
    case "move":
      return `${PLAYER_LABEL[ev.by]} plays${ev.cell !== undefined ? ` cell ${ev.cell}` : ""}`;
  }
}

export class GameView {
  root: HTMLElement;

  constructor(
    container: HTMLElement,
    private flow: SessionFlow,
  ) {
    this.root = el("div", { class: "bidgames" });
    container.append(this.root);
    flow.onChange((doc, controls) => this.render(doc, controls));
  }

  render(doc: SessionDoc, controls: Controls): void {
    this.root.textContent = "";
    if (!chipsInvariantHolds(doc)) {
      throw new Error("rendered chip totals do not sum to k");
    }
    this.root.append(
      this.renderStatus(doc),
      this.renderBoard(doc, controls),
      this.renderControls(doc, controls),
      this.renderHistory(doc),
    );
    if (this.flow.lastError) {
      this.root.append(
        el(
          "div",
          { class: "error", role: "alert" },
          `${this.flow.lastError.code}: ${this.flow.lastError.message} `,
          this.button("Retry", "retry", () => void this.flow.refresh()),
        ),
      );
    }
  }

  private button(label: string, cls: string, onClick: () => void): HTMLButtonElement {
    const b = el("button", { class: cls, type: "button" }, label);
    b.addEventListener("click", onClick);
    return b;
  }

  private renderStatus(doc: SessionDoc): HTMLElement {
    const s = doc.state;
    const phase = el("div", { class: "phase", "data-phase": s.phase }, `phase: ${s.phase}`);
    const chips = el(
      "div",
      { class: "chips" },
      el("span", { class: "chips-alice" }, `Alice ${chipLine(doc, "alice")}`),
      " vs ",
      el("span", { class: "chips-bob" }, `Bob ${chipLine(doc, "bob")}`),
    );
    const star = el(
      "div",
      { class: "advantage" },
      s.advantage ? `advantage: ${PLAYER_LABEL[s.advantage]}` : "no advantage token",
    );
    return el("header", { class: "status" }, phase, chips, star);
  }

  private renderBoard(doc: SessionDoc, controls: Controls): HTMLElement {
    const s = doc.state;
    if (s.board === null) {
      return el("div", { class: "position" }, `position: ${s.position_label}`);
    }
    const grid = el("div", { class: "board", role: "grid" });
    const movable = controls.moveInput !== null ? new Set(doc.legal.cells ?? []) : new Set<number>();
    for (let c = 0; c < 9; c++) {
      const mark = s.board[c];
      const cell = el(
        "button",
        { class: "cell", type: "button", "data-cell": String(c) },
        mark === "." ? "" : mark,
      );
      const hint = doc.hints?.alice_needs?.[String(c)];
      if (hint && mark === ".") {
        cell.title = `Alice needs ${hint["A"]} here / ${hint["B"]} if Bob takes it`;
        cell.append(el("span", { class: "hint" }, hint["A"]));
      }
      if (movable.has(c)) {
        cell.addEventListener("click", () => void this.flow.submitMove({ cell: c }));
      } else {
        cell.disabled = true;
      }
      grid.append(cell);
    }
    return grid;
  }

  private renderControls(doc: SessionDoc, controls: Controls): HTMLElement {
    const s = doc.state;
    const box = el("div", { class: "controls" });
    if (controls.finished) {
      box.append(
        el("div", { class: "outcome", "data-outcome": s.outcome ?? "" }, `result: ${s.outcome}`),
        this.button("Replay", "replay", () => this.showReplay(doc)),
      );
      return box;
    }
    for (const p of controls.bidEntry) {
      const committedNote = s.bids_submitted.length
        ? ` (${s.bids_submitted.map((q) => PLAYER_LABEL[q]).join(", ")} committed)`
        : "";
      const max = p === "alice" ? s.alice : s.bob;
      const input = el("input", {
        class: `bid-input bid-${p}`,
        type: "number",
        min: "0",
        max: String(max),
        value: "0",
      });
      const form = el(
        "div",
        { class: `bid-entry bid-entry-${p}` },
        el("label", {}, `${PLAYER_LABEL[p]} sealed bid${committedNote}: `),
        input,
        this.button("Commit", `commit-${p}`, () => {
          void this.flow.commitBid(p, Number(input.value));
        }),
      );
      box.append(form);
    }
    if (controls.tieDialog) {
      box.append(
        el(
          "div",
          { class: "tie-dialog", role: "dialog" },
          el("p", {}, `Bids are tied. ${PLAYER_LABEL[controls.tieDialog]} holds the advantage:`),
          this.button("Use it: win the bid, pass the token", "tie-self", () =>
            void this.flow.answerTie(true),
          ),
          this.button("Keep it: opponent wins the bid", "tie-decline", () =>
            void this.flow.answerTie(false),
          ),
        ),
      );
    }
    if (controls.electionChoice) {
      const options = doc.legal.elections ?? [];
      const dialog = el(
        "div",
        { class: "election-control" },
        el("p", {}, `${PLAYER_LABEL[controls.electionChoice]} won the bid:`),
      );
      if (options.includes("self")) {
        dialog.append(this.button("Move", "elect-self", () => void this.flow.elect("self")));
      }
      if (options.includes("force_opponent")) {
        dialog.append(
          this.button("Force opponent to move", "elect-force", () =>
            void this.flow.elect("force_opponent"),
          ),
        );
      }
      box.append(dialog);
    }
    if (controls.moveInput && s.board === null) {
      const moves = doc.legal.moves ?? [];
      const picker = el(
        "div",
        { class: "move-picker" },
        el("p", {}, `${PLAYER_LABEL[controls.moveInput]} to move:`),
      );
      for (const m of moves) {
        picker.append(
          this.button(`-> ${m}`, "move-option", () => void this.flow.submitMove({ move: m })),
        );
      }
      box.append(picker);
    }
    return box;
  }

  private renderHistory(doc: SessionDoc): HTMLElement {
    const list = el("ol", { class: "history" });
    for (const ev of doc.events) {
      list.append(el("li", {}, describeEvent(ev)));
    }
    return el("aside", { class: "history-pane" }, el("h3", {}, "History"), list);
  }

  private showReplay(doc: SessionDoc): void {
    const pane = el("div", { class: "replay-pane" }, el("h3", {}, "Replay"));
    doc.events.forEach((ev, i) => {
      pane.append(el("div", { class: "replay-step" }, `${i + 1}. ${describeEvent(ev)}`));
    });
    this.root.append(pane);
  }
}
