/** Camera state and world<->screen transforms.
 *
 * The formulas mirror the service exactly: zoom 1 fits the grid's x extent to
 * the window width, pixelsPerUnit = windowW * zoom / xExtent, and the visible
 * world rectangle is center +- (windowW, windowH) / (2 * pixelsPerUnit).
 * Screen y grows downward, world y upward. Every mutation returns a fresh
 * state object so an interaction event updates the view atomically.
 */

import type { Bounds, CameraParams } from "./api.js";

export interface ViewState {
  gridName: string;
  centerX: number;
  centerY: number;
  zoom: number;
  scaleThreshold: number;
  windowW: number;
  windowH: number;
  colorBy: string;
}

export interface Rect {
  min: [number, number];
  max: [number, number];
}

export function pixelsPerUnit(state: ViewState, bounds: Bounds): number {
  return (state.windowW * state.zoom) / (bounds.max[0] - bounds.min[0]);
}

export function viewRect(state: ViewState, bounds: Bounds): Rect {
  const ppu = pixelsPerUnit(state, bounds);
  const halfW = state.windowW / (2 * ppu);
  const halfH = state.windowH / (2 * ppu);
  return {
    min: [state.centerX - halfW, state.centerY - halfH],
    max: [state.centerX + halfW, state.centerY + halfH],
  };
}

export function worldToScreen(
  state: ViewState,
  bounds: Bounds,
  x: number,
  y: number,
): [number, number] {
  const ppu = pixelsPerUnit(state, bounds);
  return [
    (x - state.centerX) * ppu + state.windowW / 2,
    state.windowH / 2 - (y - state.centerY) * ppu,
  ];
}

export function screenToWorld(
  state: ViewState,
  bounds: Bounds,
  px: number,
  py: number,
): [number, number] {
  const ppu = pixelsPerUnit(state, bounds);
  return [
    state.centerX + (px - state.windowW / 2) / ppu,
    state.centerY + (state.windowH / 2 - py) / ppu,
  ];
}

/** Shift the view by a screen-space drag delta (the world follows the mouse). */
export function pan(state: ViewState, bounds: Bounds, dxPx: number, dyPx: number): ViewState {
  const ppu = pixelsPerUnit(state, bounds);
  return { ...state, centerX: state.centerX - dxPx / ppu, centerY: state.centerY + dyPx / ppu };
}

/** Scale the zoom, keeping the world point under the cursor fixed on screen. */
export function zoomAt(
  state: ViewState,
  bounds: Bounds,
  factor: number,
  px: number,
  py: number,
): ViewState {
  const [wx, wy] = screenToWorld(state, bounds, px, py);
  const zoomed = { ...state, zoom: state.zoom * factor };
  const ppu = pixelsPerUnit(zoomed, bounds);
  return {
    ...zoomed,
    centerX: wx - (px - state.windowW / 2) / ppu,
    centerY: wy + (py - state.windowH / 2) / ppu,
  };
}

/** Largest zoom at which the whole grid is inside the view rectangle. */
export function fitView(state: ViewState, bounds: Bounds): ViewState {
  const xExt = bounds.max[0] - bounds.min[0];
  const yExt = bounds.max[1] - bounds.min[1];
  const zoom = Math.min(1, (state.windowH / state.windowW) * (xExt / yExt));
  return {
    ...state,
    zoom,
    centerX: (bounds.min[0] + bounds.max[0]) / 2,
    centerY: (bounds.min[1] + bounds.max[1]) / 2,
  };
}

export function cameraParams(state: ViewState): CameraParams {
  return {
    w: state.windowW,
    h: state.windowH,
    z: state.zoom,
    s: state.scaleThreshold,
    cx: state.centerX,
    cy: state.centerY,
  };
}
