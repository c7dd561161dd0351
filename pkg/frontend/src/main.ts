/** Browser entry point: wires the controller to a canvas and the HUD. */

import { ApiClient, type GridInfo } from "./api.js";
import { ViewerController, type Frame } from "./controller.js";
import { drawQuads, formatHud, type RectPainter } from "./renderer.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8000";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const hud = document.getElementById("hud") as HTMLDivElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const gridSelect = document.getElementById("grid") as HTMLSelectElement;
const colorSelect = document.getElementById("color") as HTMLSelectElement;
const thresholdSlider = document.getElementById("threshold") as HTMLInputElement;
const thresholdLabel = document.getElementById("threshold-label") as HTMLSpanElement;
const fitButton = document.getElementById("fit") as HTMLButtonElement;

const api = new ApiClient(SERVICE_URL);
let controller: ViewerController | undefined;

function painter(): RectPainter {
  const ctx = canvas.getContext("2d")!;
  return {
    clear: () => {
      ctx.fillStyle = "#10141c";
      ctx.fillRect(0, 0, canvas.width, canvas.height);
    },
    fillRect: (x, y, w, h, color) => {
      ctx.fillStyle = color;
      // keep sub-pixel cells visible while panning
      ctx.fillRect(x, y, Math.max(w, 0.75), Math.max(h, 0.75));
    },
  };
}

function renderFrame(frame: Frame): void {
  banner.hidden = true;
  drawQuads(painter(), frame.payload, frame.state, controller!.grid.bounds);
  hud.textContent = formatHud(frame.payload.stats);
}

function showError(message: string): void {
  banner.textContent = `service error: ${message} (showing last good frame)`;
  banner.hidden = false;
}

function dpr(): number {
  return window.devicePixelRatio || 1;
}

function sizeCanvas(): void {
  // backing-store pixels: sub-pixel culling then matches what is really drawn
  canvas.width = Math.max(1, Math.round(canvas.clientWidth * dpr()));
  canvas.height = Math.max(1, Math.round(canvas.clientHeight * dpr()));
  controller?.setWindow(canvas.width, canvas.height);
}

function sliderThreshold(): number {
  // log slider: 0..100 -> 0.25..64 pixels
  const t = Number(thresholdSlider.value) / 100;
  return 0.25 * Math.pow(256, t);
}

async function attach(grid: GridInfo): Promise<void> {
  controller = new ViewerController(api, grid, canvas.width, canvas.height);
  controller.onFrame(renderFrame);
  controller.onError(showError);
  controller.setThreshold(sliderThreshold());

  colorSelect.innerHTML = "";
  for (const field of ["depth", "density"]) {
    const option = document.createElement("option");
    option.value = option.textContent = field;
    colorSelect.appendChild(option);
  }
  controller.refresh();
}

async function boot(): Promise<void> {
  sizeCanvas();
  const grids = await api.listGrids();
  if (!grids.length) {
    showError("no grids loaded; start htg-serve with a non-empty --grids directory");
    return;
  }
  gridSelect.innerHTML = "";
  for (const g of grids.filter((g) => g.dimension === 2)) {
    const option = document.createElement("option");
    option.value = option.textContent = g.name;
    gridSelect.appendChild(option);
  }
  await attach(grids.find((g) => g.name === gridSelect.value)!);

  gridSelect.onchange = async () => {
    const grid = grids.find((g) => g.name === gridSelect.value);
    if (grid) await attach(grid);
  };
  colorSelect.onchange = () => controller?.setColorBy(colorSelect.value);
  thresholdSlider.oninput = () => {
    const s = sliderThreshold();
    thresholdLabel.textContent = `${s.toFixed(2)} px`;
    controller?.setThreshold(s);
  };
  fitButton.onclick = () => controller?.fit();

  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.addEventListener("pointerdown", (e) => {
    dragging = true;
    lastX = e.offsetX;
    lastY = e.offsetY;
    canvas.setPointerCapture(e.pointerId);
  });
  canvas.addEventListener("pointermove", (e) => {
    if (!dragging) return;
    controller?.panBy((e.offsetX - lastX) * dpr(), (e.offsetY - lastY) * dpr());
    lastX = e.offsetX;
    lastY = e.offsetY;
  });
  canvas.addEventListener("pointerup", () => {
    dragging = false;
  });
  canvas.addEventListener("wheel", (e) => {
    e.preventDefault();
    const factor = Math.pow(2, -e.deltaY / 240);
    controller?.zoomAt(factor, e.offsetX * dpr(), e.offsetY * dpr());
  });
  window.addEventListener("resize", sizeCanvas);
}

boot().catch((err) => showError(err instanceof Error ? err.message : String(err)));
