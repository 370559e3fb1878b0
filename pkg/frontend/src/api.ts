/** Typed client for the ordersearch session service HTTP API. */

export type Preference = "A" | "B" | "tie";

export interface Recipe {
  citric_acid_pct: number;
  sugar_pct: number;
}

export interface OptionPayload {
  point: [number, number];
  recipe?: Recipe;
}

export interface Progress {
  comparisons: number;
  iteration: number;
  k_total: number;
  n_inner: number;
  phase: string | null;
  status: "active" | "complete";
}

export interface ActiveQuestion {
  token: string;
  option_a: OptionPayload;
  option_b: OptionPayload;
  progress: Progress;
}

export interface FinalResult {
  point: [number, number];
  recipe?: Recipe;
}

export interface CompletedQuestion {
  status: "complete";
  final: FinalResult;
  progress: Progress;
}

export type QuestionPayload = ActiveQuestion | CompletedQuestion;

export function isComplete(q: QuestionPayload): q is CompletedQuestion {
  return "status" in q && q.status === "complete";
}

export interface RegionPayload {
  center: [number, number];
  half_width: number;
  half_height: number;
}

export interface HistoryRect extends RegionPayload {
  phase: string;
}

export interface SegmentPayload {
  p0: [number, number];
  p1: [number, number];
  phase: string;
}

export interface AnswerRecord {
  first: [number, number];
  second: [number, number];
  answer: Preference;
  phase: string;
  iteration: number;
}

export interface SessionConfigPayload {
  domain: RegionPayload;
  k_total: number;
  n_inner: number;
  tie_stop: boolean;
  label_mode: "recipe" | "raw";
}

export interface SessionState {
  id: string;
  status: "active" | "complete";
  created_at: string;
  updated_at: string;
  config: SessionConfigPayload;
  region: RegionPayload;
  history: HistoryRect[];
  segments: SegmentPayload[];
  answered: AnswerRecord[];
  ties: AnswerRecord[];
  comparisons: number;
  progress: Progress;
  final?: FinalResult;
}

export interface AnswerSummary {
  id: string;
  status: "active" | "complete";
  region: RegionPayload;
  progress: Progress;
  final?: FinalResult;
}

export interface SessionRow {
  id: string;
  status: string;
  comparisons: number;
  created_at: string;
}

export interface DomainBounds {
  x_min: number;
  x_max: number;
  y_min: number;
  y_max: number;
}

export interface CreateSessionRequest {
  domain?: DomainBounds;
  k_total?: number;
  n_inner?: number;
  tie_stop?: boolean;
  label_mode?: "recipe" | "raw";
}

/** Error codes the service uses: invalid_answer, tie_disabled, stale_token,
 *  session_complete, unknown_session, invalid_config. "network" marks a
 *  failure before any HTTP status was received. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

/** Structural subset of fetch, so tests can substitute a plain stub. */
export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

async function request<T>(
  fetchImpl: FetchLike,
  url: string,
  init?: Parameters<FetchLike>[1],
): Promise<T> {
  let response: Awaited<ReturnType<FetchLike>>;
  try {
    response = await fetchImpl(url, init);
  } catch (err) {
    throw new ServiceError(0, "network", `cannot reach the service: ${String(err)}`);
  }
  if (!response.ok) {
    let code = "http_error";
    let message = `request failed with status ${response.status}`;
    try {
      const body = (await response.json()) as { error?: string; code?: string };
      if (body && typeof body.code === "string") code = body.code;
      if (body && typeof body.error === "string") message = body.error;
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ServiceError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export class ServiceClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  createSession(config: CreateSessionRequest = {}): Promise<{ id: string }> {
    return request(this.fetchImpl, this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(config),
    });
  }

  listSessions(): Promise<SessionRow[]> {
    return request(this.fetchImpl, this.url("/sessions"));
  }

  getQuestion(id: string): Promise<QuestionPayload> {
    return request(this.fetchImpl, this.url(`/sessions/${id}/question`));
  }

  getState(id: string): Promise<SessionState> {
    return request(this.fetchImpl, this.url(`/sessions/${id}/state`));
  }

  postAnswer(id: string, token: string, preference: Preference): Promise<AnswerSummary> {
    return request(this.fetchImpl, this.url(`/sessions/${id}/answer`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ token, preference }),
    });
  }
}
