/** Browser application: create a tasting session, answer pairwise questions,
 *  and watch the candidate region shrink on a canvas map.
 *
 *  The app is a pure client of the session service HTTP API.  All region
 *  geometry is drawn exactly as reported by GET /sessions/{id}/state; the
 *  search logic lives entirely on the server.
 */

import {
  isComplete,
  ServiceClient,
  ServiceError,
} from "./api.js";
import type {
  ActiveQuestion,
  CreateSessionRequest,
  FinalResult,
  OptionPayload,
  Preference,
  QuestionPayload,
  Recipe,
  SessionState,
} from "./api.js";
import { buildScene } from "./geometry.js";
import type { Scene } from "./geometry.js";
import { paintScene } from "./render.js";
import type { Canvas2DLike } from "./render.js";

function fmtSig(value: number, digits: number): string {
  return Number(value.toPrecision(digits)).toString();
}

export function recipeLabel(recipe: Recipe): string {
  return `citric acid ${fmtSig(recipe.citric_acid_pct, 3)}% · sugar ${fmtSig(recipe.sugar_pct, 3)}%`;
}

export function optionLabel(option: OptionPayload): string {
  if (option.recipe) return recipeLabel(option.recipe);
  const [x, y] = option.point;
  return `(${fmtSig(x, 6)}, ${fmtSig(y, 6)})`;
}

export function finalLabel(final: FinalResult): string {
  if (final.recipe) return recipeLabel(final.recipe);
  const [x, y] = final.point;
  return `(${fmtSig(x, 6)}, ${fmtSig(y, 6)})`;
}

export function progressLabel(q: QuestionPayload): string {
  const p = q.progress;
  if (isComplete(q) || p.status === "complete") {
    return `finished after ${p.comparisons} comparisons`;
  }
  const phase = p.phase ? p.phase.replaceAll("_", " ") : "";
  return (
    `comparison ${p.comparisons + 1} · round ${p.iteration + 1} of ${p.k_total}` +
    (phase ? ` · ${phase} search` : "")
  );
}

const FORM_HTML = `
  <h2>New tasting session</h2>
  <form class="os-form">
    <label>Label style
      <select name="label_mode">
        <option value="recipe" selected>drink recipes</option>
        <option value="raw">raw coordinates</option>
      </select>
    </label>
    <label>Halving rounds
      <input name="k_total" type="number" value="2">
    </label>
    <label>Comparisons per line search
      <input name="n_inner" type="number" value="5">
    </label>
    <label class="os-check">
      <input name="tie_stop" type="checkbox" checked>
      stop a line search early on "tastes the same"
    </label>
    <fieldset class="os-domain" hidden>
      <legend>Search square (raw coordinates)</legend>
      <label>x min <input name="x_min" type="number" value="1" step="any"></label>
      <label>x max <input name="x_max" type="number" value="4" step="any"></label>
      <label>y min <input name="y_min" type="number" value="1" step="any"></label>
      <label>y max <input name="y_max" type="number" value="4" step="any"></label>
    </fieldset>
    <div class="os-form-error" role="alert" hidden></div>
    <button type="submit" class="os-start">Start session</button>
  </form>
`;

const SESSION_HTML = `
  <div class="os-error" role="alert" hidden>
    <span class="os-error-msg"></span>
    <button type="button" class="os-retry">Retry</button>
  </div>
  <div class="os-question">
    <div class="os-token"></div>
    <div class="os-progress"></div>
    <div class="os-choices">
      <button type="button" class="os-answer os-answer-a">
        <strong>Prefer A</strong><span class="os-option-a"></span>
      </button>
      <button type="button" class="os-answer os-answer-tie">They taste the same</button>
      <button type="button" class="os-answer os-answer-b">
        <strong>Prefer B</strong><span class="os-option-b"></span>
      </button>
    </div>
  </div>
  <div class="os-final" hidden>
    <h3>Recommended mix</h3>
    <div class="os-final-recipe"></div>
    <div class="os-final-note"></div>
  </div>
  <div class="os-map">
    <canvas class="os-canvas" width="480" height="480"></canvas>
    <div class="os-map-summary"></div>
    <div class="os-legend">
      <span class="os-legend-history">past regions</span>
      <span class="os-legend-current">current region</span>
      <span class="os-legend-search">searched segments (dashed)</span>
      <span class="os-legend-tie">tie pairs (bold)</span>
    </div>
  </div>
`;

export interface AppOptions {
  /** question polling interval in ms; 0 disables polling (used in tests) */
  pollMs?: number;
  canvasSize?: number;
}

interface FormErrors {
  message: string | null;
  config: CreateSessionRequest | null;
}

export function validateForm(values: {
  k_total: string;
  n_inner: string;
  tie_stop: boolean;
  label_mode: string;
  x_min: string;
  x_max: string;
  y_min: string;
  y_max: string;
}): FormErrors {
  const k = Number(values.k_total);
  if (!Number.isInteger(k) || k < 1) {
    return { message: "halving rounds must be a whole number of at least 1", config: null };
  }
  const n = Number(values.n_inner);
  if (!Number.isInteger(n) || n < 1) {
    return {
      message: "comparisons per line search must be a whole number of at least 1",
      config: null,
    };
  }
  const labelMode = values.label_mode === "raw" ? "raw" : "recipe";
  const config: CreateSessionRequest = {
    k_total: k,
    n_inner: n,
    tie_stop: values.tie_stop,
    label_mode: labelMode,
  };
  if (labelMode === "raw") {
    const bounds = {
      x_min: Number(values.x_min),
      x_max: Number(values.x_max),
      y_min: Number(values.y_min),
      y_max: Number(values.y_max),
    };
    if (Object.values(bounds).some((v) => !Number.isFinite(v))) {
      return { message: "all four square bounds must be numbers", config: null };
    }
    const w = bounds.x_max - bounds.x_min;
    const h = bounds.y_max - bounds.y_min;
    if (w <= 0 || h <= 0) {
      return { message: "the search square must have positive width and height", config: null };
    }
    if (Math.abs(w - h) > 1e-9 * Math.max(w, h)) {
      return { message: "the search region must be a square (equal width and height)", config: null };
    }
    config.domain = bounds;
  }
  return { message: null, config };
}

export class App {
  readonly root: HTMLElement;
  readonly client: ServiceClient;
  readonly pollMs: number;
  readonly canvasSize: number;

  sessionId: string | null = null;
  currentState: SessionState | null = null;
  currentQuestion: QuestionPayload | null = null;
  lastScene: Scene | null = null;

  private inflight: Promise<void> | null = null;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;

  private setup!: HTMLElement;
  private screen!: HTMLElement;

  constructor(root: HTMLElement, client: ServiceClient, opts: AppOptions = {}) {
    this.root = root;
    this.client = client;
    this.pollMs = opts.pollMs ?? 1500;
    this.canvasSize = opts.canvasSize ?? 480;
    this.buildDom();
  }

  // ---- DOM scaffolding -------------------------------------------------

  private buildDom(): void {
    this.root.innerHTML = "";
    this.setup = document.createElement("section");
    this.setup.className = "os-setup";
    this.setup.innerHTML = FORM_HTML;
    this.screen = document.createElement("section");
    this.screen.className = "os-session";
    this.screen.hidden = true;
    this.screen.innerHTML = SESSION_HTML;
    this.root.append(this.setup, this.screen);

    const form = this.q<HTMLFormElement>(".os-form");
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitForm();
    });
    this.q<HTMLSelectElement>("select[name=label_mode]").addEventListener("change", () => {
      this.q<HTMLFieldSetElement>(".os-domain").hidden =
        this.q<HTMLSelectElement>("select[name=label_mode]").value !== "raw";
    });
    this.q<HTMLButtonElement>(".os-answer-a").addEventListener("click", () => {
      void this.answer("A");
    });
    this.q<HTMLButtonElement>(".os-answer-b").addEventListener("click", () => {
      void this.answer("B");
    });
    this.q<HTMLButtonElement>(".os-answer-tie").addEventListener("click", () => {
      void this.answer("tie");
    });
    this.q<HTMLButtonElement>(".os-retry").addEventListener("click", () => {
      void this.refresh();
    });
    const canvas = this.q<HTMLCanvasElement>(".os-canvas");
    canvas.width = this.canvasSize;
    canvas.height = this.canvasSize;
  }

  q<T extends Element>(selector: string): T {
    const el = this.root.querySelector(selector);
    if (!el) throw new Error(`missing element: ${selector}`);
    return el as T;
  }

  // ---- single-flight request gate ---------------------------------------

  get busy(): boolean {
    return this.inflight !== null;
  }

  /** Resolves once no request is in flight (errors included). */
  async idle(): Promise<void> {
    while (this.inflight) {
      await this.inflight.catch(() => undefined);
    }
  }

  private run(op: () => Promise<void>): Promise<void> {
    if (this.inflight) return this.inflight;
    this.setBusy(true);
    const p = op()
      .catch((err) => this.showError(err))
      .finally(() => {
        this.inflight = null;
        this.setBusy(false);
      });
    this.inflight = p;
    return p;
  }

  private setBusy(busy: boolean): void {
    for (const sel of [".os-answer-a", ".os-answer-b", ".os-answer-tie", ".os-retry", ".os-start"]) {
      this.q<HTMLButtonElement>(sel).disabled = busy;
    }
  }

  // ---- error banner ------------------------------------------------------

  private showError(err: unknown): void {
    const banner = this.q<HTMLElement>(".os-error");
    const msg = this.q<HTMLElement>(".os-error-msg");
    if (err instanceof ServiceError) {
      msg.textContent =
        err.code === "network"
          ? `Connection problem: ${err.message}. Nothing was lost — retry when ready.`
          : `The service said no (${err.code}): ${err.message}. Retry to re-sync.`;
    } else {
      msg.textContent = `Unexpected problem: ${String(err)}`;
    }
    banner.hidden = false;
  }

  private clearError(): void {
    this.q<HTMLElement>(".os-error").hidden = true;
  }

  // ---- form --------------------------------------------------------------

  private formValues() {
    const val = (name: string) => this.q<HTMLInputElement>(`[name=${name}]`).value;
    return {
      k_total: val("k_total"),
      n_inner: val("n_inner"),
      tie_stop: this.q<HTMLInputElement>("[name=tie_stop]").checked,
      label_mode: this.q<HTMLSelectElement>("[name=label_mode]").value,
      x_min: val("x_min"),
      x_max: val("x_max"),
      y_min: val("y_min"),
      y_max: val("y_max"),
    };
  }

  submitForm(): Promise<void> {
    const errorEl = this.q<HTMLElement>(".os-form-error");
    const { message, config } = validateForm(this.formValues());
    if (message !== null || config === null) {
      errorEl.textContent = message ?? "invalid settings";
      errorEl.hidden = false;
      return Promise.resolve();
    }
    errorEl.hidden = true;
    return this.run(async () => {
      const { id } = await this.client.createSession(config);
      await this.loadSession(id);
    });
  }

  openSession(id: string): Promise<void> {
    return this.run(() => this.loadSession(id));
  }

  private async loadSession(id: string): Promise<void> {
    this.sessionId = id;
    const state = await this.client.getState(id);
    const question = await this.client.getQuestion(id);
    this.setup.hidden = true;
    this.screen.hidden = false;
    this.render(state, question);
    this.schedulePoll();
  }

  // ---- session actions -----------------------------------------------------

  answer(preference: Preference): Promise<void> {
    const id = this.sessionId;
    const question = this.currentQuestion;
    if (!id || !question || isComplete(question)) return Promise.resolve();
    const token = (question as ActiveQuestion).token;
    return this.run(async () => {
      await this.client.postAnswer(id, token, preference);
      const state = await this.client.getState(id);
      const next = await this.client.getQuestion(id);
      this.render(state, next);
    });
  }

  refresh(): Promise<void> {
    const id = this.sessionId;
    if (!id) return Promise.resolve();
    return this.run(async () => {
      const state = await this.client.getState(id);
      const question = await this.client.getQuestion(id);
      this.render(state, question);
    });
  }

  stop(): void {
    this.stopped = true;
    if (this.pollTimer !== null) clearTimeout(this.pollTimer);
    this.pollTimer = null;
  }

  private schedulePoll(): void {
    if (this.pollMs <= 0 || this.stopped) return;
    if (this.currentQuestion && isComplete(this.currentQuestion)) return;
    if (this.pollTimer !== null) clearTimeout(this.pollTimer);
    this.pollTimer = setTimeout(() => {
      this.pollTimer = null;
      if (this.stopped || this.busy) {
        this.schedulePoll();
        return;
      }
      void this.pollOnce().finally(() => this.schedulePoll());
    }, this.pollMs);
  }

  private pollOnce(): Promise<void> {
    const id = this.sessionId;
    if (!id) return Promise.resolve();
    return this.run(async () => {
      const question = await this.client.getQuestion(id);
      if (JSON.stringify(question) === JSON.stringify(this.currentQuestion)) return;
      const state = await this.client.getState(id);
      this.render(state, question);
    });
  }

  // ---- rendering -------------------------------------------------------------

  private render(state: SessionState, question: QuestionPayload): void {
    this.currentState = state;
    this.currentQuestion = question;
    this.clearError();

    const questionCard = this.q<HTMLElement>(".os-question");
    const finalCard = this.q<HTMLElement>(".os-final");
    this.q<HTMLElement>(".os-progress").textContent = progressLabel(question);

    if (isComplete(question)) {
      questionCard.hidden = true;
      finalCard.hidden = false;
      this.q<HTMLElement>(".os-final-recipe").textContent = finalLabel(question.final);
      this.q<HTMLElement>(".os-final-note").textContent =
        `settled after ${question.progress.comparisons} comparisons · ` +
        `best point (${question.final.point[0]}, ${question.final.point[1]})`;
      this.stop();
    } else {
      questionCard.hidden = false;
      finalCard.hidden = true;
      this.q<HTMLElement>(".os-token").textContent = `question ${question.token}`;
      this.q<HTMLElement>(".os-token").setAttribute("data-token", question.token);
      this.q<HTMLElement>(".os-option-a").textContent = optionLabel(question.option_a);
      this.q<HTMLElement>(".os-option-b").textContent = optionLabel(question.option_b);
      this.q<HTMLButtonElement>(".os-answer-tie").hidden = !state.config.tie_stop;
    }

    this.lastScene = buildScene(state, this.canvasSize, this.canvasSize);
    const canvas = this.q<HTMLCanvasElement>(".os-canvas");
    const ctx = canvas.getContext("2d") as Canvas2DLike | null;
    if (ctx) paintScene(ctx, this.lastScene);
    this.q<HTMLElement>(".os-map-summary").textContent =
      `${state.history.length} regions · ${state.segments.length} searched segments · ` +
      `${state.ties.length} ties · ${state.comparisons} comparisons`;
  }
}

export function createApp(
  root: HTMLElement,
  client: ServiceClient,
  opts: AppOptions = {},
): App {
  return new App(root, client, opts);
}

export { ServiceClient, ServiceError } from "./api.js";

/** Boot automatically when the host page provides the marker element. */
if (typeof document !== "undefined") {
  const mount = document.getElementById("ordersearch-app");
  if (mount) {
    const base = new URLSearchParams(window.location.search).get("service") ?? "";
    createApp(mount, new ServiceClient(base));
  }
}
