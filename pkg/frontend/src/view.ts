// Pure view model: the session state rearranged for the board.
// Every clickable action corresponds to exactly one schema from the service;
// no legality judgment happens here.

import { MoveSchema, SessionState } from "./client.js";

export interface Clickable {
  label: string;
  schema: MoveSchema;
  needsConstant: boolean;
}

export interface LeafRow {
  address: string;
  formula: string;
  actions: Clickable[];
}

export interface TreeView {
  slot: number;
  leaves: LeafRow[];
}

export interface RunEntry {
  badge: "⊤" | "⊥";   // ownership badge
  move: string;
}

export interface PositionView {
  succedent: string;
  succedentActions: Clickable[];
  antecedent: TreeView[];
  closurePrompts: Clickable[];
  runLog: RunEntry[];
  verdictBanner: string | null;
  tick: number;
}

function describe(schema: MoveSchema): string {
  switch (schema.kind) {
    case "choose-left":
      return "choose left";
    case "choose-right":
      return "choose right";
    case "choose-constant":
      return schema.var ? `constant for ${schema.var}` : "constant";
    case "replicate":
      return `replicate @${schema.address || "ε"}`;
  }
}

function clickable(schema: MoveSchema): Clickable {
  return {
    label: describe(schema),
    schema,
    needsConstant: schema.kind === "choose-constant",
  };
}

export function viewModel(state: SessionState): PositionView {
  const closure = state.position.closurePending.length > 0;
  const closurePrompts = closure
    ? state.schemas.map(clickable)
    : [];
  const succedentActions = closure
    ? []
    : state.schemas.filter((s) => s.slot === null).map(clickable);
  const bySlot = new Map<number, MoveSchema[]>();
  if (!closure) {
    for (const s of state.schemas) {
      if (s.slot !== null) {
        const got = bySlot.get(s.slot) || [];
        got.push(s);
        bySlot.set(s.slot, got);
      }
    }
  }
  const antecedent: TreeView[] = state.position.antecedent.map((tree) => ({
    slot: tree.slot,
    leaves: tree.leaves.map((leaf) => ({
      address: leaf.address,
      formula: leaf.formula,
      actions: (bySlot.get(tree.slot) || [])
        .filter((s) => (s.address || "") === leaf.address
          || leaf.address.startsWith(s.address || ""))
        .map(clickable),
    })),
  }));
  let verdictBanner: string | null = null;
  if (state.status === "finished") {
    verdictBanner = state.verdict === "T" ? "⊤ wins"
      : state.verdict === "B" ? "⊥ wins" : "undetermined";
  }
  return {
    succedent: state.position.succedent,
    succedentActions,
    antecedent,
    closurePrompts,
    runLog: state.run.map((m) => ({
      badge: m.player === "T" ? "⊤" : "⊥",
      move: m.move,
    })),
    verdictBanner,
    tick: state.tick,
  };
}

export function runLogStrings(view: PositionView): string[] {
  return view.runLog.map((e) => e.badge + e.move);
}
