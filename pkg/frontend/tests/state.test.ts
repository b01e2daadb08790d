import { describe, expect, it } from "vitest";

import { StageState } from "../src/state.js";

const STATEMENTS = [
  { id: "1/1", text: "Mary is a woman." },
  { id: "1/2", text: "Tom is a doctor." },
  { id: "1/3", text: "Lisa is a woman or is a doctor." },
];

describe("StageState", () => {
  it("starts with nothing chosen or locked", () => {
    const state = new StageState(STATEMENTS);
    expect(state.unansweredCount()).toBe(3);
    expect(state.rows.every((r) => !r.locked && r.chosen === null)).toBe(true);
  });

  it("locks a row as soon as it is chosen", () => {
    const state = new StageState(STATEMENTS);
    state.markChosen("1/2", "dont_know");
    const row = state.row("1/2");
    expect(row.chosen).toBe("dont_know");
    expect(row.locked).toBe(true);
    expect(state.unansweredCount()).toBe(2);
  });

  it("locks everything at the deadline without touching choices", () => {
    const state = new StageState(STATEMENTS);
    state.markChosen("1/1", "true");
    state.lockAll();
    expect(state.deadlineReached).toBe(true);
    expect(state.rows.every((r) => r.locked)).toBe(true);
    expect(state.row("1/1").chosen).toBe("true");
    expect(state.row("1/3").chosen).toBeNull();
  });

  it("answeredAll only when every row has a choice", () => {
    const state = new StageState(STATEMENTS);
    for (const { id } of STATEMENTS) state.markChosen(id, "false");
    expect(state.answeredAll()).toBe(true);
  });

  it("rejects unknown statement ids", () => {
    const state = new StageState(STATEMENTS);
    expect(() => state.row("9/9")).toThrow();
  });
});
