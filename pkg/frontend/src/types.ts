// Mirrors of the service JSON documents (bidsession-1 schema).

export type PlayerName = "alice" | "bob";
export type RuleName = "standard" | "make_it_take_it" | "losers_ball" | "ladies_first";
export type PhaseName =
  | "awaiting_bids"
  | "awaiting_tie_choice"
  | "awaiting_election"
  | "awaiting_move"
  | "finished";

export type SessionEvent =
  | { type: "bids"; alice: number; bob: number }
  | { type: "tie_choice"; holder: PlayerName; self_win: boolean }
  | { type: "tie_auto"; winner: PlayerName }
  | { type: "election"; by: PlayerName; election: "self" | "force_opponent" }
  | { type: "move"; by: PlayerName; to: number; cell?: number };

export type SessionState = {
  phase: PhaseName;
  position: number;
  position_label: string;
  board: string | null;
  alice: number;
  bob: number;
  advantage: PlayerName | null;
  round: number;
  outcome: "alice_win" | "bob_win" | "draw" | null;
  actor: PlayerName | null;
  bids_submitted: PlayerName[];
};

export type LegalActions = {
  cells?: number[];
  moves?: number[];
  elections?: ("self" | "force_opponent")[];
};

export type HintData = {
  current: string | null;
  alice_needs: Record<string, Record<string, string>>;
};

export type SessionDoc = {
  id: string;
  version: string;
  config: {
    game: string;
    k: number;
    alice_amount: number;
    advantage: PlayerName | null;
    rule: RuleName;
    ai_controls: PlayerName[];
    hints: boolean;
  };
  events: SessionEvent[];
  state: SessionState;
  legal: LegalActions;
  hints?: HintData;
};

export type ApiErrorBody = { code: string; message: string };

export type CreateSessionRequest = {
  game: string;
  k: number;
  split: string;
  rule?: RuleName;
  ai_controls?: PlayerName[];
  hints?: boolean;
};
