// World canvas: heatmap cells when zoomed out, score-sized institution
// circles past the zoom threshold. Rendering is split into a pure scene
// computation (testable without a 2D context) and an optional paint pass.

import {
  CIRCLE_ZOOM_THRESHOLD,
  CircleMark,
  CellRect,
  Viewport,
  cellRect,
  circleMarks,
  heatColor,
  hitTestCircles,
  unproject,
} from "./geo.js";
import type { HeatmapCell, InstitutionResult } from "./types.js";

export type MapMode = "heatmap" | "circles";

export interface MapScene {
  mode: MapMode;
  rects: CellRect[];
  circles: CircleMark[];
}

export function computeScene(
  viewport: Viewport,
  cells: HeatmapCell[],
  cellDegrees: number,
  institutions: InstitutionResult[],
): MapScene {
  if (viewport.zoom >= CIRCLE_ZOOM_THRESHOLD) {
    return { mode: "circles", rects: [], circles: circleMarks(viewport, institutions) };
  }
  return {
    mode: "heatmap",
    rects: cells.map((cell) => cellRect(viewport, cell, cellDegrees)),
    circles: [],
  };
}

export interface MapCallbacks {
  onViewportChange: (viewport: Viewport) => void;
  onSelectInstitution: (institutionId: string) => void;
}

export interface MapController {
  element: HTMLElement;
  render(
    cells: HeatmapCell[],
    cellDegrees: number,
    institutions: InstitutionResult[],
  ): MapScene;
  viewport(): Viewport;
  setViewport(centerLat: number, centerLon: number, zoom: number): void;
  zoomBy(factor: number): void;
  scene(): MapScene;
}

export function createMapView(
  doc: Document,
  callbacks: MapCallbacks,
  width = 720,
  height = 400,
): MapController {
  const wrapper = doc.createElement("div");
  wrapper.className = "mapview";
  const canvas = doc.createElement("canvas");
  canvas.width = width;
  canvas.height = height;
  wrapper.appendChild(canvas);

  const zoomControls = doc.createElement("div");
  zoomControls.className = "zoom-controls";
  const zoomIn = doc.createElement("button");
  zoomIn.textContent = "+";
  zoomIn.setAttribute("data-action", "zoom-in");
  const zoomOut = doc.createElement("button");
  zoomOut.textContent = "−";
  zoomOut.setAttribute("data-action", "zoom-out");
  zoomControls.append(zoomIn, zoomOut);
  wrapper.appendChild(zoomControls);

  let view: Viewport = { centerLat: 25, centerLon: 0, zoom: 1, width, height };
  let lastScene: MapScene = { mode: "heatmap", rects: [], circles: [] };
  let lastCells: HeatmapCell[] = [];
  let lastCellDegrees = 1;
  let lastInstitutions: InstitutionResult[] = [];

  function paint(scene: MapScene): void {
    const ctx = canvas.getContext ? canvas.getContext("2d") : null;
    if (!ctx) return; // headless test environment: scene math still ran
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#0b2740";
    ctx.fillRect(0, 0, width, height);
    if (scene.mode === "heatmap") {
      const peak = scene.rects.reduce((acc, rect) => Math.max(acc, rect.value), 0);
      // visual smoothing only; values (and any legend) stay the raw cells
      const blur = Math.min(8, Math.max(1, (scene.rects[0]?.width ?? 4) / 3));
      ctx.filter = `blur(${blur.toFixed(1)}px)`;
      for (const rect of scene.rects) {
        ctx.fillStyle = heatColor(rect.value, peak);
        ctx.fillRect(rect.x, rect.y, rect.width, rect.height);
      }
      ctx.filter = "none";
    } else {
      for (const mark of scene.circles) {
        ctx.beginPath();
        ctx.arc(mark.x, mark.y, mark.radius, 0, Math.PI * 2);
        ctx.fillStyle = "rgba(255,167,38,0.65)";
        ctx.fill();
        ctx.strokeStyle = "#ffd54f";
        ctx.stroke();
      }
    }
  }

  function render(
    cells: HeatmapCell[],
    cellDegrees: number,
    institutions: InstitutionResult[],
  ): MapScene {
    lastCells = cells;
    lastCellDegrees = cellDegrees;
    lastInstitutions = institutions;
    lastScene = computeScene(view, cells, cellDegrees, institutions);
    paint(lastScene);
    return lastScene;
  }

  function setViewport(centerLat: number, centerLon: number, zoom: number): void {
    view = { ...view, centerLat, centerLon, zoom: Math.max(1, Math.min(64, zoom)) };
    render(lastCells, lastCellDegrees, lastInstitutions);
    callbacks.onViewportChange(view);
  }

  function zoomBy(factor: number): void {
    setViewport(view.centerLat, view.centerLon, view.zoom * factor);
  }

  zoomIn.addEventListener("click", () => zoomBy(2));
  zoomOut.addEventListener("click", () => zoomBy(0.5));

  canvas.addEventListener("click", (event) => {
    if (lastScene.mode !== "circles") return;
    const mouse = event as MouseEvent;
    const bounds = (canvas as unknown as { getBoundingClientRect?: () => DOMRect })
      .getBoundingClientRect;
    const box = bounds ? bounds.call(canvas) : { left: 0, top: 0 };
    const hit = hitTestCircles(
      lastScene.circles,
      mouse.clientX - box.left,
      mouse.clientY - box.top,
    );
    if (hit) callbacks.onSelectInstitution(hit.institutionId);
  });

  canvas.addEventListener("dblclick", (event) => {
    const mouse = event as MouseEvent;
    const bounds = (canvas as unknown as { getBoundingClientRect?: () => DOMRect })
      .getBoundingClientRect;
    const box = bounds ? bounds.call(canvas) : { left: 0, top: 0 };
    const { lat, lon } = unproject(view, mouse.clientX - box.left, mouse.clientY - box.top);
    setViewport(lat, lon, view.zoom * 2);
  });

  return {
    element: wrapper,
    render,
    viewport: () => view,
    setViewport,
    zoomBy,
    scene: () => lastScene,
  };
}
