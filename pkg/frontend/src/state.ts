// Stage-local row state: which statements are chosen, and what is locked.
// A row locks as soon as its answer is accepted (no revision); everything
// locks when the stage deadline is reached.

import { StatementItem, SubjectAnswer } from "./api.js";

export type Chosen = SubjectAnswer | null;

export interface Row {
  id: string;
  text: string;
  chosen: Chosen;
  locked: boolean;
}

export class StageState {
  readonly rows: Row[];
  deadlineReached = false;

  constructor(statements: StatementItem[]) {
    this.rows = statements.map((s) => ({ id: s.id, text: s.text, chosen: null, locked: false }));
  }

  row(id: string): Row {
    const row = this.rows.find((r) => r.id === id);
    if (!row) throw new Error(`no such statement row: ${id}`);
    return row;
  }

  markChosen(id: string, answer: SubjectAnswer): void {
    const row = this.row(id);
    row.chosen = answer;
    row.locked = true;
  }

  lockAll(): void {
    this.deadlineReached = true;
    for (const row of this.rows) row.locked = true;
  }

  unansweredCount(): number {
    return this.rows.filter((r) => r.chosen === null).length;
  }

  answeredAll(): boolean {
    return this.unansweredCount() === 0;
  }
}
