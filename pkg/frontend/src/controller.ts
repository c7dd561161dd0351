/** Headless viewer loop: owns the view state, re-requests the surface on
 * every camera change through the latest-wins scheduler, and hands finished
 * frames (payload + the exact state that produced them) to the UI. On a
 * network failure the last good frame is retained and an error message is
 * exposed instead. */

import { ApiClient, type CameraParams, type GridInfo, type SurfacePayload } from "./api.js";
import { LatestWins } from "./scheduler.js";
import {
  cameraParams,
  fitView,
  pan,
  zoomAt,
  type ViewState,
} from "./view.js";

export interface Frame {
  payload: SurfacePayload;
  state: ViewState;
  seq: number;
}

interface RequestArgs {
  camera: CameraParams;
  colorBy: string;
  state: ViewState;
}

export class ViewerController {
  state: ViewState;
  lastFrame: Frame | undefined;
  lastError: string | undefined;

  private readonly scheduler: LatestWins<RequestArgs, SurfacePayload>;
  private frameListeners: ((frame: Frame) => void)[] = [];
  private errorListeners: ((message: string) => void)[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly grid: GridInfo,
    windowW: number,
    windowH: number,
    debounceMs = 50,
  ) {
    this.state = fitView(
      {
        gridName: grid.name,
        centerX: 0,
        centerY: 0,
        zoom: 1,
        scaleThreshold: 1,
        windowW,
        windowH,
        colorBy: "depth",
      },
      grid.bounds,
    );
    this.scheduler = new LatestWins(
      (args, signal) => this.api.fetchSurface(this.grid.name, args.camera, args.colorBy, signal),
      (payload, args, seq) => {
        this.lastError = undefined;
        this.lastFrame = { payload, state: args.state, seq };
        for (const cb of this.frameListeners) cb(this.lastFrame);
      },
      (err) => {
        this.lastError = err instanceof Error ? err.message : String(err);
        for (const cb of this.errorListeners) cb(this.lastError);
      },
      debounceMs,
    );
  }

  onFrame(cb: (frame: Frame) => void): void {
    this.frameListeners.push(cb);
  }

  onError(cb: (message: string) => void): void {
    this.errorListeners.push(cb);
  }

  get busy(): boolean {
    return this.scheduler.busy;
  }

  /** Waits until the scheduler has gone idle (frames drained). */
  async settle(pollMs = 5): Promise<void> {
    while (this.busy) {
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
  }

  refresh(): void {
    this.scheduler.submit({
      camera: cameraParams(this.state),
      colorBy: this.state.colorBy,
      state: this.state,
    });
  }

  private update(state: ViewState): void {
    this.state = state;
    this.refresh();
  }

  setWindow(w: number, h: number): void {
    this.update({ ...this.state, windowW: w, windowH: h });
  }

  panBy(dxPx: number, dyPx: number): void {
    this.update(pan(this.state, this.grid.bounds, dxPx, dyPx));
  }

  zoomAt(factor: number, px: number, py: number): void {
    this.update(zoomAt(this.state, this.grid.bounds, factor, px, py));
  }

  setThreshold(s: number): void {
    this.update({ ...this.state, scaleThreshold: s });
  }

  setColorBy(field: string): void {
    this.update({ ...this.state, colorBy: field });
  }

  fit(): void {
    this.update(fitView(this.state, this.grid.bounds));
  }
}
