/** Shared test helpers: the recorded-session fixture, a fetch stub that
 *  replays it, and a canvas stub that records draw calls. */

import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import type {
  ActiveQuestion,
  AnswerSummary,
  CompletedQuestion,
  Preference,
  SessionState,
} from "../src/api.js";

export interface SessionFixture {
  config_request: Record<string, unknown>;
  session_id: string;
  questions: ActiveQuestion[];
  answers: { token: string; preference: Preference }[];
  summaries: AnswerSummary[];
  /** states[i] = session state after i answers */
  states: SessionState[];
  completion: CompletedQuestion;
}

export function loadFixture(): SessionFixture {
  // vitest runs with the package root as cwd; import.meta.url is not a file
  // URL under the happy-dom environment, so resolve from cwd instead.
  const path = resolve(process.cwd(), "tests/fixtures/session.json");
  return JSON.parse(readFileSync(path, "utf8")) as SessionFixture;
}

export interface StubResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export function jsonResponse(status: number, body: unknown): StubResponse {
  return { ok: status >= 200 && status < 300, status, json: async () => body };
}

type FailureHook = (method: string, url: string) => StubResponse | "reject" | null;

/** Replays the recorded service transcript.  Any answer that deviates from
 *  the recording (wrong token, wrong preference) is rejected, so the UI can
 *  only pass by posting exactly what the real service saw. */
export class FixtureService {
  answered = 0;
  calls: { method: string; url: string }[] = [];
  private failures: FailureHook[] = [];

  constructor(readonly fixture: SessionFixture) {}

  /** Queue a one-shot failure; it fires on the first request the hook matches. */
  failOnce(hook: FailureHook): void {
    this.failures.push(hook);
  }

  fetch = async (
    url: string,
    init?: { method?: string; headers?: Record<string, string>; body?: string },
  ): Promise<StubResponse> => {
    const method = init?.method ?? "GET";
    this.calls.push({ method, url });
    const hook = this.failures[0];
    if (hook) {
      const planned = hook(method, url);
      if (planned === "reject") {
        this.failures.shift();
        throw new TypeError("network down");
      }
      if (planned) {
        this.failures.shift();
        return planned;
      }
    }

    const fx = this.fixture;
    const sid = fx.session_id;
    if (method === "POST" && url.endsWith("/sessions")) {
      return jsonResponse(200, { id: sid });
    }
    if (method === "GET" && url.endsWith(`/sessions/${sid}/question`)) {
      const body = this.answered < fx.answers.length ? fx.questions[this.answered] : fx.completion;
      return jsonResponse(200, body);
    }
    if (method === "GET" && url.endsWith(`/sessions/${sid}/state`)) {
      return jsonResponse(200, fx.states[this.answered]);
    }
    if (method === "POST" && url.endsWith(`/sessions/${sid}/answer`)) {
      if (this.answered >= fx.answers.length) {
        return jsonResponse(409, { error: "the session is already complete", code: "session_complete" });
      }
      const posted = JSON.parse(init?.body ?? "{}") as { token?: string; preference?: string };
      const expected = fx.answers[this.answered]!;
      if (posted.token !== expected.token) {
        return jsonResponse(409, {
          error: `token ${posted.token} does not match the current question`,
          code: "stale_token",
        });
      }
      if (posted.preference !== expected.preference) {
        throw new Error(
          `UI posted preference ${posted.preference} but the recording says ${expected.preference}`,
        );
      }
      this.answered += 1;
      return jsonResponse(200, fx.summaries[this.answered - 1]);
    }
    return jsonResponse(404, { error: "unknown route", code: "unknown_session" });
  };
}

export type CtxOp =
  | { op: "clearRect" }
  | { op: "strokeRect"; x: number; y: number; w: number; h: number; lineWidth: number; strokeStyle: string }
  | { op: "fillRect"; x: number; y: number; w: number; h: number; fillStyle: string }
  | {
      op: "strokeLine";
      x0: number;
      y0: number;
      x1: number;
      y1: number;
      lineWidth: number;
      strokeStyle: string;
      dash: number[];
    }
  | { op: "fillCircle"; x: number; y: number; r: number; fillStyle: string };

/** Structural stand-in for a 2D canvas context that records what was drawn. */
export class RecordingCtx {
  lineWidth = 1;
  strokeStyle = "";
  fillStyle = "";
  ops: CtxOp[] = [];

  private dash: number[] = [];
  private move: [number, number] | null = null;
  private line: [number, number] | null = null;
  private circle: { x: number; y: number; r: number } | null = null;

  clearRect(): void {
    this.ops.push({ op: "clearRect" });
  }

  strokeRect(x: number, y: number, w: number, h: number): void {
    this.ops.push({ op: "strokeRect", x, y, w, h, lineWidth: this.lineWidth, strokeStyle: this.strokeStyle });
  }

  fillRect(x: number, y: number, w: number, h: number): void {
    this.ops.push({ op: "fillRect", x, y, w, h, fillStyle: this.fillStyle });
  }

  beginPath(): void {
    this.move = this.line = this.circle = null;
  }

  moveTo(x: number, y: number): void {
    this.move = [x, y];
  }

  lineTo(x: number, y: number): void {
    this.line = [x, y];
  }

  arc(x: number, y: number, r: number): void {
    this.circle = { x, y, r };
  }

  stroke(): void {
    if (this.move && this.line) {
      this.ops.push({
        op: "strokeLine",
        x0: this.move[0],
        y0: this.move[1],
        x1: this.line[0],
        y1: this.line[1],
        lineWidth: this.lineWidth,
        strokeStyle: this.strokeStyle,
        dash: [...this.dash],
      });
    }
  }

  fill(): void {
    if (this.circle) {
      this.ops.push({ op: "fillCircle", ...this.circle, fillStyle: this.fillStyle });
    }
  }

  setLineDash(pattern: number[]): void {
    this.dash = [...pattern];
  }
}
