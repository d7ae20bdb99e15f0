import { describe, expect, it } from "vitest";

import { chipsInvariantHolds, deriveControls } from "../src/flow.js";
import { describeEvent } from "../src/view.js";
import type { SessionDoc } from "../src/types.js";

function doc(overrides: {
  phase: SessionDoc["state"]["phase"];
  actor?: SessionDoc["state"]["actor"];
  bids_submitted?: SessionDoc["state"]["bids_submitted"];
  elections?: ("self" | "force_opponent")[];
  ai?: ("alice" | "bob")[];
  alice?: number;
  bob?: number;
}): SessionDoc {
  return {
    id: "t",
    version: "bidsession-1",
    config: {
      game: "ttt",
      k: (overrides.alice ?? 4) + (overrides.bob ?? 4),
      alice_amount: overrides.alice ?? 4,
      advantage: "alice",
      rule: "standard",
      ai_controls: overrides.ai ?? [],
      hints: false,
    },
    events: [],
    state: {
      phase: overrides.phase,
      position: 0,
      position_label: ".........",
      board: ".........",
      alice: overrides.alice ?? 4,
      bob: overrides.bob ?? 4,
      advantage: "alice",
      round: 0,
      outcome: overrides.phase === "finished" ? "alice_win" : null,
      actor: overrides.actor ?? null,
      bids_submitted: overrides.bids_submitted ?? [],
    },
    legal: { elections: overrides.elections, cells: [0, 1, 2] },
  };
}

describe("phase gating mirrors the server state machine", () => {
  it("opens sealed-bid entry only for humans who have not committed", () => {
    const c = deriveControls(doc({ phase: "awaiting_bids" }));
    expect(c.bidEntry).toEqual(["alice", "bob"]);
    const c2 = deriveControls(doc({ phase: "awaiting_bids", bids_submitted: ["alice"] }));
    expect(c2.bidEntry).toEqual(["bob"]);
    const c3 = deriveControls(doc({ phase: "awaiting_bids", ai: ["bob"] }));
    expect(c3.bidEntry).toEqual(["alice"]);
    expect(c3.tieDialog).toBeNull();
  });

  it("shows the tie dialog exactly in the tie phase, for the holder", () => {
    const c = deriveControls(doc({ phase: "awaiting_tie_choice", actor: "alice" }));
    expect(c.tieDialog).toBe("alice");
    expect(c.bidEntry).toEqual([]);
    for (const phase of ["awaiting_bids", "awaiting_election", "awaiting_move"] as const) {
      expect(deriveControls(doc({ phase, actor: "alice" })).tieDialog).toBeNull();
    }
  });

  it("shows the two-way election control only when both options are legal", () => {
    const both = deriveControls(
      doc({ phase: "awaiting_election", actor: "bob", elections: ["self", "force_opponent"] }),
    );
    expect(both.electionChoice).toBe("bob");
    expect(both.moveInput).toBeNull();
    const onlySelf = deriveControls(
      doc({ phase: "awaiting_election", actor: "bob", elections: ["self"] }),
    );
    expect(onlySelf.electionChoice).toBeNull();
    expect(onlySelf.moveInput).toBe("bob");
  });

  it("routes the forced mover to the move input", () => {
    const c = deriveControls(doc({ phase: "awaiting_move", actor: "alice" }));
    expect(c.moveInput).toBe("alice");
    expect(c.electionChoice).toBeNull();
  });

  it("suppresses all inputs for AI actors and when finished", () => {
    const c = deriveControls(
      doc({ phase: "awaiting_election", actor: "bob", ai: ["bob"], elections: ["self"] }),
    );
    expect(c.electionChoice).toBeNull();
    expect(c.moveInput).toBeNull();
    expect(deriveControls(doc({ phase: "finished" })).finished).toBe(true);
  });
});

describe("view helpers", () => {
  it("chip totals must sum to k", () => {
    expect(chipsInvariantHolds(doc({ phase: "awaiting_bids", alice: 3, bob: 5 }))).toBe(true);
    const broken = doc({ phase: "awaiting_bids", alice: 3, bob: 5 });
    broken.state.bob = 4;
    expect(chipsInvariantHolds(broken)).toBe(false);
  });

  it("describes every event kind", () => {
    expect(describeEvent({ type: "bids", alice: 2, bob: 1 })).toContain("Alice 2");
    expect(describeEvent({ type: "tie_choice", holder: "alice", self_win: true })).toContain(
      "uses the advantage",
    );
    expect(describeEvent({ type: "election", by: "bob", election: "force_opponent" })).toContain(
      "forces",
    );
    expect(describeEvent({ type: "move", by: "alice", cell: 4, to: 9 })).toContain("cell 4");
  });
});
