// Typed client for the experiment service HTTP API. The client only ever
// sees statement ids/texts, SVG text, and clock values — never truths.

export interface StatementItem {
  id: string;
  text: string;
}

export interface StagePayload {
  stage: number;
  stages_total: number;
  ontograph: string;
  statements: StatementItem[];
  remaining_seconds: number;
}

export interface AnswerPayload {
  accepted: boolean;
  elapsed_ms: number;
  remaining_seconds: number;
}

export interface AdvancePayload {
  finished: boolean;
  stage: number | null;
  stages_total: number;
}

export type SubjectAnswer = "true" | "false" | "dont_know";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, reason: string, status: number) {
    super(reason);
    this.code = code;
    this.status = status;
  }
}

async function request<T>(input: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(input, init);
  } catch (err) {
    throw new ApiError("unreachable", `service unreachable: ${err}`, 0);
  }
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const code = typeof body.code === "string" ? body.code : "error";
    const reason = typeof body.reason === "string" ? body.reason : response.statusText;
    throw new ApiError(code, reason, response.status);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  async createSession(experiment: string, subject: string): Promise<string> {
    const body = await request<{ session: string }>(`${this.base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ experiment, subject }),
    });
    return body.session;
  }

  getStage(session: string): Promise<StagePayload> {
    return request<StagePayload>(`${this.base}/sessions/${session}/stage`);
  }

  submitAnswer(session: string, statement: string, answer: SubjectAnswer): Promise<AnswerPayload> {
    return request<AnswerPayload>(`${this.base}/sessions/${session}/answers`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ statement, answer }),
    });
  }

  advance(session: string, confirmDontKnow: boolean): Promise<AdvancePayload> {
    return request<AdvancePayload>(`${this.base}/sessions/${session}/advance`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ confirm_dont_know: confirmDontKnow }),
    });
  }
}
