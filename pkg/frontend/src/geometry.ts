/** Pure view-model: turn a session state payload into canvas draw commands.
 *
 * Every scene element keeps a `world` reference to the untouched payload
 * object it came from — the canvas coordinates are derived by one affine
 * transform and nothing else.  The region history is drawn exactly as the
 * service reported it; this module never re-derives region pruning.
 */

import type {
  AnswerRecord,
  HistoryRect,
  RegionPayload,
  SegmentPayload,
  SessionState,
} from "./api.js";

export interface Transform {
  /** world units -> pixels (same for x and y; the domain is square) */
  scale: number;
  /** canvas x of world x_min */
  offsetX: number;
  /** canvas y of world y_max (canvas y grows downward) */
  offsetY: number;
}

export function makeTransform(
  domain: RegionPayload,
  width: number,
  height: number,
  pad: number,
): Transform {
  const usableW = width - 2 * pad;
  const usableH = height - 2 * pad;
  const scale = Math.min(usableW / (2 * domain.half_width), usableH / (2 * domain.half_height));
  const [cx, cy] = domain.center;
  return {
    scale,
    offsetX: width / 2 - cx * scale,
    offsetY: height / 2 + cy * scale,
  };
}

export function toCanvas(t: Transform, p: readonly [number, number]): [number, number] {
  return [t.offsetX + p[0] * t.scale, t.offsetY - p[1] * t.scale];
}

export function fromCanvas(t: Transform, p: readonly [number, number]): [number, number] {
  return [(p[0] - t.offsetX) / t.scale, (t.offsetY - p[1]) / t.scale];
}

export interface SceneRect {
  world: RegionPayload | HistoryRect;
  kind: "history" | "current";
  /** order in the shrink history, 0 = full domain */
  index: number;
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface SceneLine {
  world: SegmentPayload | AnswerRecord;
  kind: "search" | "tie";
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface SceneMark {
  world: [number, number];
  x: number;
  y: number;
}

export interface Scene {
  transform: Transform;
  width: number;
  height: number;
  rects: SceneRect[];
  lines: SceneLine[];
  final?: SceneMark;
}

function rectToScene(
  t: Transform,
  rect: RegionPayload,
  kind: SceneRect["kind"],
  index: number,
  world: RegionPayload | HistoryRect,
): SceneRect {
  const [left, top] = toCanvas(t, [rect.center[0] - rect.half_width, rect.center[1] + rect.half_height]);
  return {
    world,
    kind,
    index,
    x: left,
    y: top,
    w: 2 * rect.half_width * t.scale,
    h: 2 * rect.half_height * t.scale,
  };
}

function lineToScene(
  t: Transform,
  p0: readonly [number, number],
  p1: readonly [number, number],
  kind: SceneLine["kind"],
  world: SceneLine["world"],
): SceneLine {
  const [x0, y0] = toCanvas(t, p0);
  const [x1, y1] = toCanvas(t, p1);
  return { world, kind, x0, y0, x1, y1 };
}

export function buildScene(
  state: SessionState,
  width = 480,
  height = 480,
  pad = 24,
): Scene {
  const t = makeTransform(state.config.domain, width, height, pad);
  const rects: SceneRect[] = state.history.map((rect, i) =>
    rectToScene(t, rect, "history", i, rect),
  );
  rects.push(rectToScene(t, state.region, "current", state.history.length, state.region));
  const lines: SceneLine[] = state.segments.map((seg) =>
    lineToScene(t, seg.p0, seg.p1, "search", seg),
  );
  for (const tie of state.ties) {
    lines.push(lineToScene(t, tie.first, tie.second, "tie", tie));
  }
  const scene: Scene = { transform: t, width, height, rects, lines };
  if (state.final) {
    const [x, y] = toCanvas(t, state.final.point);
    scene.final = { world: state.final.point, x, y };
  }
  return scene;
}
