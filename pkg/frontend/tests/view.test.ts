import { describe, expect, it } from "vitest";

import { MoveSchema, SessionState, instantiateSchema } from "../src/client.js";
import { runLogStrings, viewModel } from "../src/view.js";

function schema(partial: Partial<MoveSchema>): MoveSchema {
  return {
    kind: "choose-left", owner: "B", prefix: "", slot: null,
    address: null, path: [], var: null, ...partial,
  };
}

function state(partial: Partial<SessionState>): SessionState {
  return {
    id: "s", sequent: "||- p", status: "awaiting-env", verdict: null, tick: 0,
    position: { closurePending: [], valuation: {}, succedent: "p", antecedent: [] },
    schemas: [], run: [], ...partial,
  };
}

describe("instantiateSchema", () => {
  it("builds the four move shapes", () => {
    expect(instantiateSchema(schema({ kind: "choose-left", prefix: "1.0." })))
      .toBe("1.0.0");
    expect(instantiateSchema(schema({ kind: "choose-right", prefix: "1." })))
      .toBe("1.1");
    expect(instantiateSchema(schema({ kind: "replicate", prefix: "0.1.:" })))
      .toBe("0.1.:");
    expect(instantiateSchema(schema({ kind: "choose-constant", prefix: "1." }), "101"))
      .toBe("1.101");
  });

  it("rejects bad numerals client-side", () => {
    expect(() => instantiateSchema(schema({ kind: "choose-constant" }), "01"))
      .toThrow();
    expect(() => instantiateSchema(schema({ kind: "choose-constant" }), ""))
      .toThrow();
  });
});

describe("viewModel", () => {
  it("maps every schema to exactly one clickable", () => {
    const s = state({
      position: {
        closurePending: [], valuation: {}, succedent: "p & q",
        antecedent: [{ slot: 0, leaves: [{ address: "", formula: "p | q" }] }],
      },
      schemas: [
        schema({ kind: "choose-left", prefix: "1." }),
        schema({ kind: "choose-right", prefix: "1." }),
        schema({ kind: "choose-left", prefix: "0.0..", slot: 0, address: "" }),
      ],
    });
    const view = viewModel(s);
    const total = view.succedentActions.length
      + view.antecedent.flatMap((t) => t.leaves).reduce((n, l) => n + l.actions.length, 0);
    expect(total).toBe(3);
  });

  it("surfaces closure prompts during the opening phase", () => {
    const s = state({
      position: { closurePending: ["s"], valuation: {}, succedent: "p(s)", antecedent: [] },
      schemas: [schema({ kind: "choose-constant", var: "s" })],
    });
    const view = viewModel(s);
    expect(view.closurePrompts).toHaveLength(1);
    expect(view.closurePrompts[0].needsConstant).toBe(true);
    expect(view.succedentActions).toHaveLength(0);
  });

  it("renders run badges and the verdict banner", () => {
    const s = state({
      status: "finished", verdict: "T",
      run: [{ player: "B", move: "1.10" }, { player: "T", move: "1.1000" }],
    });
    const view = viewModel(s);
    expect(runLogStrings(view)).toEqual(["⊥1.10", "⊤1.1000"]);
    expect(view.verdictBanner).toBe("⊤ wins");
  });
});
