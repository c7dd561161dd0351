/** Quad rasterization against an abstract painter (the canvas 2D context in
 * the app, a recorder in tests). Quads arrive as axis-aligned rectangles in
 * world space and are filled with the scalar color ramp. */

import type { Bounds, SurfacePayload, SurfaceStats } from "./api.js";
import { colorScale } from "./colormap.js";
import type { ViewState } from "./view.js";
import { worldToScreen } from "./view.js";

export interface RectPainter {
  clear(): void;
  fillRect(x: number, y: number, w: number, h: number, color: string): void;
}

/** Draws every quad; returns the number drawn. */
export function drawQuads(
  painter: RectPainter,
  payload: SurfacePayload,
  state: ViewState,
  bounds: Bounds,
): number {
  painter.clear();
  const { points, quads, values } = payload;
  const color = colorScale(values);
  const n = Math.floor(quads.length / 4);
  for (let i = 0; i < n; i++) {
    let minX = Infinity;
    let minY = Infinity;
    let maxX = -Infinity;
    let maxY = -Infinity;
    for (let k = 0; k < 4; k++) {
      const p = quads[4 * i + k];
      const x = points[2 * p];
      const y = points[2 * p + 1];
      if (x < minX) minX = x;
      if (x > maxX) maxX = x;
      if (y < minY) minY = y;
      if (y > maxY) maxY = y;
    }
    const [sx0, sy1] = worldToScreen(state, bounds, minX, minY);
    const [sx1, sy0] = worldToScreen(state, bounds, maxX, maxY);
    painter.fillRect(sx0, sy0, sx1 - sx0, sy1 - sy0, color(values[i]));
  }
  return n;
}

export function formatHud(stats: SurfaceStats | undefined): string {
  if (!stats) return "no frame";
  return (
    `${stats.quad_count} quads · depth cap ${stats.depth_cap} · ` +
    `${stats.elapsed_ms.toFixed(1)} ms server`
  );
}
