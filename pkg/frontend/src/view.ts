// DOM construction. Everything is rebuilt from state, no virtual anything;
// callers hold references to the pieces they need to update.

import { SubjectAnswer } from "./api.js";
import { StageState } from "./state.js";

export const ANSWER_LABELS: Record<SubjectAnswer, string> = {
  true: "true",
  false: "false",
  dont_know: "don't know",
};

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderErrorScreen(root: HTMLElement, message: string, onRetry: () => void): void {
  root.replaceChildren();
  const box = el("div", "error-screen");
  box.append(el("p", "error-message", message));
  const retry = el("button", "retry-button", "Retry");
  retry.addEventListener("click", onRetry);
  box.append(retry);
  root.append(box);
}

export function renderCompletionScreen(root: HTMLElement, sessionId: string): void {
  root.replaceChildren();
  const box = el("div", "completion-screen");
  box.append(el("h2", undefined, "All done - thank you!"));
  box.append(el("p", undefined, "Please give this session id to the experimenter:"));
  box.append(el("code", "session-id", sessionId));
  root.append(box);
}

export interface StageWidgets {
  timer: HTMLElement;
  rows: Map<string, HTMLElement>;
  advanceButton: HTMLButtonElement;
  confirmBar: HTMLElement;
  confirmButton: HTMLButtonElement;
  cancelButton: HTMLButtonElement;
  prompt: HTMLElement;
}

export function renderStageScreen(
  root: HTMLElement,
  stageIndex: number,
  stagesTotal: number,
  svg: string,
  state: StageState,
  onChoose: (id: string, answer: SubjectAnswer) => void,
): StageWidgets {
  root.replaceChildren();

  const header = el("div", "header");
  header.append(el("span", "stage-label", `Ontograph ${stageIndex + 1} of ${stagesTotal}`));
  const timer = el("span", "timer", "--:--");
  header.append(timer);
  root.append(header);

  const panel = el("div", "panel");
  const diagram = el("div", "diagram");
  diagram.innerHTML = svg;
  panel.append(diagram);

  const list = el("div", "statements");
  const rows = new Map<string, HTMLElement>();
  for (const row of state.rows) {
    const rowEl = el("div", "statement-row");
    rowEl.dataset.statement = row.id;
    rowEl.append(el("span", "statement-text", row.text));
    const buttons = el("span", "answer-buttons");
    for (const answer of ["true", "false", "dont_know"] as SubjectAnswer[]) {
      const button = el("button", `answer answer-${answer}`, ANSWER_LABELS[answer]);
      button.addEventListener("click", () => onChoose(row.id, answer));
      buttons.append(button);
    }
    rowEl.append(buttons);
    list.append(rowEl);
    rows.set(row.id, rowEl);
  }
  panel.append(list);
  root.append(panel);

  const footer = el("div", "footer");
  const prompt = el("span", "prompt", "");
  footer.append(prompt);
  const advanceButton = el("button", "advance-button", "Next ontograph");
  footer.append(advanceButton);

  const confirmBar = el("div", "confirm-bar");
  confirmBar.hidden = true;
  const confirmText = el("span", "confirm-text", "");
  const confirmButton = el("button", "confirm-button", "Record as don't know");
  const cancelButton = el("button", "cancel-button", "Keep answering");
  confirmBar.append(confirmText, confirmButton, cancelButton);
  footer.append(confirmBar);
  root.append(footer);

  return { timer, rows, advanceButton, confirmBar, confirmButton, cancelButton, prompt };
}

export function updateRow(widgets: StageWidgets, state: StageState, id: string): void {
  const rowEl = widgets.rows.get(id);
  if (!rowEl) return;
  const row = state.row(id);
  rowEl.classList.toggle("locked", row.locked);
  const buttons = rowEl.querySelectorAll<HTMLButtonElement>("button.answer");
  buttons.forEach((button) => {
    button.disabled = row.locked;
    const isChosen =
      row.chosen !== null && button.classList.contains(`answer-${row.chosen}`);
    button.classList.toggle("chosen", isChosen);
  });
}

export function updateAllRows(widgets: StageWidgets, state: StageState): void {
  for (const row of state.rows) updateRow(widgets, state, row.id);
}
