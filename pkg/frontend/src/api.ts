/** Typed client for the geometry service. */

export interface Bounds {
  min: number[];
  max: number[];
}

export interface GridInfo {
  name: string;
  dimension: number;
  factor: number;
  root_extent: number[];
  total_cells: number;
  leaf_count: number;
  bounds: Bounds;
}

export interface CameraParams {
  w: number;
  h: number;
  z: number;
  s: number;
  cx: number;
  cy: number;
}

export interface SurfaceStats {
  quad_count: number;
  depth_cap: number;
  elapsed_ms: number;
}

/** Flat arrays: point coords interleaved x0,y0,…; quads as groups of 4 indices. */
export interface SurfacePayload {
  points: number[];
  quads: number[];
  values: number[];
  stats: SurfaceStats;
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly code: string, detail: string) {
    super(`${code}: ${detail}`);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async listGrids(): Promise<GridInfo[]> {
    const res = await fetch(`${this.baseUrl}/grids`);
    if (!res.ok) throw new ApiError(res.status, "http_error", await res.text());
    return (await res.json()) as GridInfo[];
  }

  async fetchSurface(
    grid: string,
    camera: CameraParams,
    colorBy: string,
    signal?: AbortSignal,
  ): Promise<SurfacePayload> {
    const res = await fetch(`${this.baseUrl}/grids/${encodeURIComponent(grid)}/surface`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ camera, color_by: colorBy }),
      signal,
    });
    const body = await res.json();
    if (!res.ok) {
      throw new ApiError(res.status, body.error ?? "http_error", body.detail ?? "");
    }
    return body as SurfacePayload;
  }
}
