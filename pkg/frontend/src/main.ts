// Single-page flow: experiment and subject ids come from the URL, the rest
// is driven by the service. No configuration, no storage, no truths.

import { ApiClient, ApiError, StagePayload, SubjectAnswer } from "./api.js";
import { Countdown, formatClock } from "./countdown.js";
import { StageState } from "./state.js";
import {
  renderCompletionScreen,
  renderErrorScreen,
  renderStageScreen,
  StageWidgets,
  updateAllRows,
  updateRow,
} from "./view.js";

export interface AppOptions {
  root: HTMLElement;
  api: ApiClient;
  experiment: string;
  subject: string;
  now?: () => number;
  tickMs?: number;
}

export class App {
  private readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly experiment: string;
  private readonly subject: string;
  private session = "";
  private state: StageState | null = null;
  private widgets: StageWidgets | null = null;
  private countdown: Countdown;

  constructor(options: AppOptions) {
    this.root = options.root;
    this.api = options.api;
    this.experiment = options.experiment;
    this.subject = options.subject;
    this.countdown = new Countdown(
      (seconds) => this.showTime(seconds),
      () => this.onDeadline(),
      options.now,
      options.tickMs,
    );
  }

  async start(): Promise<void> {
    try {
      this.session = await this.api.createSession(this.experiment, this.subject);
    } catch (err) {
      this.blockingError(err, () => this.start());
      return;
    }
    await this.loadStage();
  }

  get sessionId(): string {
    return this.session;
  }

  stop(): void {
    this.countdown.stop();
  }

  private async loadStage(): Promise<void> {
    let payload: StagePayload;
    try {
      payload = await this.api.getStage(this.session);
    } catch (err) {
      this.blockingError(err, () => this.loadStage());
      return;
    }
    this.state = new StageState(payload.statements);
    this.widgets = renderStageScreen(
      this.root,
      payload.stage,
      payload.stages_total,
      payload.ontograph,
      this.state,
      (id, answer) => void this.choose(id, answer),
    );
    this.widgets.advanceButton.addEventListener("click", () => void this.advance(false));
    this.widgets.confirmButton.addEventListener("click", () => void this.advance(true));
    this.widgets.cancelButton.addEventListener("click", () => this.hideConfirm());
    updateAllRows(this.widgets, this.state);
    this.countdown.sync(payload.remaining_seconds);
    this.countdown.start();
    if (payload.remaining_seconds <= 0) this.onDeadline();
  }

  private async choose(id: string, answer: SubjectAnswer): Promise<void> {
    if (!this.state || !this.widgets) return;
    const row = this.state.row(id);
    if (row.locked) return;
    // Lock immediately: one choice, one submit.
    this.state.markChosen(id, answer);
    updateRow(this.widgets, this.state, id);
    try {
      const reply = await this.api.submitAnswer(this.session, id, answer);
      this.countdown.sync(reply.remaining_seconds);
    } catch (err) {
      if (err instanceof ApiError && err.code === "duplicate_answer") {
        return; // already recorded server-side; keep the lock
      }
      if (err instanceof ApiError && err.code === "deadline_passed") {
        row.chosen = null; // rejected server-side; the stage is over
        this.onDeadline();
        return;
      }
      // Transient failure: unlock so the subject can retry.
      row.chosen = null;
      row.locked = false;
      updateRow(this.widgets, this.state, id);
      this.note(`could not submit (${err instanceof Error ? err.message : err}); try again`);
    }
  }

  private async advance(confirmed: boolean): Promise<void> {
    if (!this.state || !this.widgets) return;
    const unanswered = this.state.unansweredCount();
    const beforeDeadline = this.countdown.current() > 0;
    if (!confirmed && unanswered > 0 && beforeDeadline) {
      this.showConfirm(unanswered);
      return;
    }
    this.hideConfirm();
    try {
      const reply = await this.api.advance(this.session, confirmed && beforeDeadline);
      this.countdown.stop();
      if (reply.finished) {
        renderCompletionScreen(this.root, this.session);
        return;
      }
      await this.loadStage();
    } catch (err) {
      if (err instanceof ApiError && err.code === "confirm_required") {
        this.showConfirm(this.state.unansweredCount());
        return;
      }
      this.note(`could not advance (${err instanceof Error ? err.message : err})`);
    }
  }

  private onDeadline(): void {
    if (!this.state || !this.widgets) return;
    if (!this.state.deadlineReached) {
      this.state.lockAll();
      updateAllRows(this.widgets, this.state);
    }
    this.note("Time is up for this ontograph - continue to the next one.");
  }

  private showTime(seconds: number): void {
    if (this.widgets) this.widgets.timer.textContent = formatClock(seconds);
  }

  private showConfirm(unanswered: number): void {
    if (!this.widgets) return;
    const text = this.widgets.confirmBar.querySelector(".confirm-text");
    if (text) {
      text.textContent =
        `${unanswered} statement${unanswered === 1 ? "" : "s"} unanswered - ` +
        "record as don't know?";
    }
    this.widgets.confirmBar.hidden = false;
  }

  private hideConfirm(): void {
    if (this.widgets) this.widgets.confirmBar.hidden = true;
  }

  private note(message: string): void {
    if (this.widgets) this.widgets.prompt.textContent = message;
  }

  private blockingError(err: unknown, retry: () => void): void {
    const message = err instanceof Error ? err.message : String(err);
    renderErrorScreen(this.root, `Cannot reach the experiment service: ${message}`, retry);
  }
}

export function bootFromLocation(root: HTMLElement): App | null {
  const params = new URLSearchParams(window.location.search);
  const experiment = params.get("experiment");
  const subject = params.get("subject");
  if (!experiment || !subject) {
    root.replaceChildren();
    const p = document.createElement("p");
    p.className = "error-message";
    p.textContent = "Missing ?experiment=...&subject=... in the URL.";
    root.append(p);
    return null;
  }
  const app = new App({ root, api: new ApiClient(""), experiment, subject });
  void app.start();
  return app;
}

declare global {
  interface Window {
    __ontographsBootstrapped?: boolean;
  }
}

if (typeof document !== "undefined" && document.getElementById("app") &&
    !window.__ontographsBootstrapped) {
  window.__ontographsBootstrapped = true;
  bootFromLocation(document.getElementById("app") as HTMLElement);
}
