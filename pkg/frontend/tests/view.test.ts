import { describe, expect, test } from "vitest";
import type { Bounds } from "../src/api.js";
import {
  cameraParams,
  fitView,
  pan,
  screenToWorld,
  viewRect,
  worldToScreen,
  zoomAt,
  type ViewState,
} from "../src/view.js";

const bounds: Bounds = { min: [0, 0], max: [2, 2] };

function state(overrides: Partial<ViewState> = {}): ViewState {
  return {
    gridName: "g",
    centerX: 1,
    centerY: 1,
    zoom: 1,
    scaleThreshold: 1,
    windowW: 100,
    windowH: 100,
    colorBy: "depth",
    ...overrides,
  };
}

describe("view rectangle (golden values shared with the service)", () => {
  // The three parameter sets mirror the service's own unit cases, so both
  // sides of the wire agree on what "visible" means.
  test("zoom 1 covers the x extent", () => {
    const rect = viewRect(state(), bounds);
    expect(rect.min).toEqual([0, 0]);
    expect(rect.max).toEqual([2, 2]);
  });

  test("zoom 2 halves the view", () => {
    const rect = viewRect(state({ zoom: 2 }), bounds);
    expect(rect.min).toEqual([0.5, 0.5]);
    expect(rect.max).toEqual([1.5, 1.5]);
  });

  test("wide window keeps x span, shrinks y", () => {
    const rect = viewRect(state({ windowW: 200, windowH: 100 }), bounds);
    expect(rect.min).toEqual([0, 0.5]);
    expect(rect.max).toEqual([2, 1.5]);
  });
});

test("screen and world transforms round-trip", () => {
  const s = state({ zoom: 1.7, centerX: 0.4, centerY: 1.2, windowW: 317, windowH: 211 });
  for (const [px, py] of [[0, 0], [317, 211], [13.5, 77.25]]) {
    const [wx, wy] = screenToWorld(s, bounds, px, py);
    const [bx, by] = worldToScreen(s, bounds, wx, wy);
    expect(bx).toBeCloseTo(px, 9);
    expect(by).toBeCloseTo(py, 9);
  }
});

test("world y up maps to screen y down", () => {
  const [, syLow] = worldToScreen(state(), bounds, 1, 0.1);
  const [, syHigh] = worldToScreen(state(), bounds, 1, 1.9);
  expect(syLow).toBeGreaterThan(syHigh);
});

test("pan follows the drag", () => {
  const s = pan(state(), bounds, 50, 0); // drag right by half the window
  expect(s.centerX).toBeCloseTo(0, 12); // world moves with the cursor
  const up = pan(state(), bounds, 0, -25); // drag up: reveal lower world y
  expect(up.centerY).toBeCloseTo(0.5, 12);
});

test("zoomAt keeps the world point under the cursor fixed", () => {
  const s0 = state({ zoom: 0.8, centerX: 0.7, centerY: 1.4 });
  const [px, py] = [23, 71];
  const before = screenToWorld(s0, bounds, px, py);
  const s1 = zoomAt(s0, bounds, 4, px, py);
  const after = screenToWorld(s1, bounds, px, py);
  expect(after[0]).toBeCloseTo(before[0], 10);
  expect(after[1]).toBeCloseTo(before[1], 10);
  expect(s1.zoom).toBeCloseTo(3.2, 12);
});

test("fitView contains the grid exactly", () => {
  const tall: Bounds = { min: [0, 0], max: [2, 3] };
  const s = fitView(state({ windowW: 800, windowH: 600 }), tall);
  const rect = viewRect(s, tall);
  expect(rect.min[0]).toBeLessThanOrEqual(0);
  expect(rect.min[1]).toBeLessThanOrEqual(0);
  expect(rect.max[0]).toBeGreaterThanOrEqual(2);
  expect(rect.max[1]).toBeGreaterThanOrEqual(3);
  expect(s.centerX).toBe(1);
  expect(s.centerY).toBe(1.5);
  // zoom is the largest fitting one: either axis is tight
  const tightX = Math.abs(rect.max[0] - 2) < 1e-12;
  const tightY = Math.abs(rect.max[1] - 3) < 1e-12;
  expect(tightX || tightY).toBe(true);
});

test("cameraParams mirrors the wire schema", () => {
  const s = state({ zoom: 2.5, scaleThreshold: 4, windowW: 640, windowH: 480 });
  expect(cameraParams(s)).toEqual({ w: 640, h: 480, z: 2.5, s: 4, cx: 1, cy: 1 });
});
