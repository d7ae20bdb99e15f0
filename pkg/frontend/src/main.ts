// Entry point: the create-game form plus the play screen.

import { ApiClient } from "./api.js";
import { SessionFlow } from "./flow.js";
import { GameView } from "./view.js";
import type { PlayerName, RuleName } from "./types.js";

function field(label: string, input: HTMLElement): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "field";
  wrap.append(label + " ", input);
  return wrap;
}

export function mount(container: HTMLElement, baseUrl: string): SessionFlow {
  const api = new ApiClient(baseUrl);
  const flow = new SessionFlow(api);

  const form = document.createElement("form");
  form.className = "create-form";
  const game = document.createElement("select");
  for (const kind of ["ttt", "tug:2", "tug:3", "ult:2", "E", "A^2", "B^2"]) {
    const opt = document.createElement("option");
    opt.value = kind;
    opt.textContent = kind;
    game.append(opt);
  }
  const k = document.createElement("input");
  k.type = "number";
  k.min = "0";
  k.value = "8";
  const split = document.createElement("input");
  split.value = "4*/4";
  const rule = document.createElement("select");
  for (const r of ["standard", "make_it_take_it", "losers_ball", "ladies_first"]) {
    const opt = document.createElement("option");
    opt.value = r;
    opt.textContent = r;
    rule.append(opt);
  }
  const aiSide = document.createElement("select");
  for (const side of ["none", "bob", "alice", "both"]) {
    const opt = document.createElement("option");
    opt.value = side;
    opt.textContent = `AI: ${side}`;
    aiSide.append(opt);
  }
  const hints = document.createElement("input");
  hints.type = "checkbox";
  const start = document.createElement("button");
  start.type = "submit";
  start.textContent = "Start game";
  form.append(
    field("game", game),
    field("chips k", k),
    field("split", split),
    field("rule", rule),
    field("opponent", aiSide),
    field("hints", hints),
    start,
  );
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const ai: PlayerName[] =
      aiSide.value === "both"
        ? ["alice", "bob"]
        : aiSide.value === "none"
          ? []
          : [aiSide.value as PlayerName];
    void flow.create({
      game: game.value,
      k: Number(k.value),
      split: split.value,
      rule: rule.value as RuleName,
      ai_controls: ai,
      hints: hints.checked,
    });
    form.hidden = true;
  });
  container.append(form);
  new GameView(container, flow);
  return flow;
}

declare global {
  interface Window {
    bidgamesMount?: typeof mount;
  }
}

if (typeof window !== "undefined") {
  window.bidgamesMount = mount;
  const auto = document.getElementById("bidgames-app");
  if (auto) {
    mount(auto, auto.dataset.api ?? "");
  }
}
