/** Canvas painter for a Scene.  Works against a structural subset of
 *  CanvasRenderingContext2D so tests can record calls with a stub, and the
 *  app can skip painting when no 2D context is available. */

import type { Scene } from "./geometry.js";

export interface Canvas2DLike {
  lineWidth: number;
  strokeStyle: string;
  fillStyle: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  setLineDash(pattern: number[]): void;
}

export const STYLE = {
  historyStroke: "#8a8f98",
  historyWidth: 1,
  currentStroke: "#1a7f37",
  currentFill: "rgba(26, 127, 55, 0.08)",
  currentWidth: 2.5,
  searchStroke: "#4477cc",
  searchWidth: 1,
  searchDash: [6, 4],
  tieStroke: "#b3261e",
  tieWidth: 3.5,
  finalFill: "#b3261e",
  finalRadius: 5,
} as const;

export function paintScene(ctx: Canvas2DLike, scene: Scene): void {
  ctx.clearRect(0, 0, scene.width, scene.height);
  ctx.setLineDash([]);

  for (const rect of scene.rects) {
    if (rect.kind !== "history") continue;
    ctx.lineWidth = STYLE.historyWidth;
    ctx.strokeStyle = STYLE.historyStroke;
    ctx.strokeRect(rect.x, rect.y, rect.w, rect.h);
  }

  ctx.setLineDash([...STYLE.searchDash]);
  ctx.lineWidth = STYLE.searchWidth;
  ctx.strokeStyle = STYLE.searchStroke;
  for (const line of scene.lines) {
    if (line.kind !== "search") continue;
    ctx.beginPath();
    ctx.moveTo(line.x0, line.y0);
    ctx.lineTo(line.x1, line.y1);
    ctx.stroke();
  }
  ctx.setLineDash([]);

  ctx.lineWidth = STYLE.tieWidth;
  ctx.strokeStyle = STYLE.tieStroke;
  for (const line of scene.lines) {
    if (line.kind !== "tie") continue;
    ctx.beginPath();
    ctx.moveTo(line.x0, line.y0);
    ctx.lineTo(line.x1, line.y1);
    ctx.stroke();
  }

  for (const rect of scene.rects) {
    if (rect.kind !== "current") continue;
    ctx.fillStyle = STYLE.currentFill;
    ctx.fillRect(rect.x, rect.y, rect.w, rect.h);
    ctx.lineWidth = STYLE.currentWidth;
    ctx.strokeStyle = STYLE.currentStroke;
    ctx.strokeRect(rect.x, rect.y, rect.w, rect.h);
  }

  if (scene.final) {
    ctx.beginPath();
    ctx.arc(scene.final.x, scene.final.y, STYLE.finalRadius, 0, 2 * Math.PI);
    ctx.fillStyle = STYLE.finalFill;
    ctx.fill();
  }
}
