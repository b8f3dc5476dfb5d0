// Equirectangular world math: cells are equal-angle, so they map to
// axis-aligned rectangles, and no basemap library is needed.

import type { HeatmapCell, InstitutionResult } from "./types.js";

/**
 * Zoom level at which the heatmap fades out and per-institution circles
 * appear. Chosen empirically: at 4x a continent roughly fills the canvas
 * and individual markers stop overlapping.
 */
export const CIRCLE_ZOOM_THRESHOLD = 4;

export const MAX_CIRCLE_RADIUS_PX = 28;

export interface Viewport {
  centerLat: number;
  centerLon: number;
  zoom: number; // 1 = whole world fits the canvas width
  width: number;
  height: number;
}

export function pixelsPerDegree(viewport: Viewport): number {
  return (viewport.width / 360) * viewport.zoom;
}

export function project(viewport: Viewport, lat: number, lon: number): { x: number; y: number } {
  const scale = pixelsPerDegree(viewport);
  return {
    x: viewport.width / 2 + (lon - viewport.centerLon) * scale,
    y: viewport.height / 2 - (lat - viewport.centerLat) * scale,
  };
}

export function unproject(viewport: Viewport, x: number, y: number): { lat: number; lon: number } {
  const scale = pixelsPerDegree(viewport);
  return {
    lon: viewport.centerLon + (x - viewport.width / 2) / scale,
    lat: viewport.centerLat - (y - viewport.height / 2) / scale,
  };
}

/**
 * Circle AREA is proportional to score (radius goes with the square root),
 * so visual ratio judgments match score ratios.
 */
export function circleRadius(score: number, maxScore: number, maxRadius = MAX_CIRCLE_RADIUS_PX): number {
  if (score <= 0 || maxScore <= 0) return 0;
  return maxRadius * Math.sqrt(score / maxScore);
}

export interface CellRect {
  x: number;
  y: number;
  width: number;
  height: number;
  value: number;
}

export function cellRect(viewport: Viewport, cell: HeatmapCell, cellDegrees: number): CellRect {
  const north = cell.center_latitude + cellDegrees / 2;
  const west = cell.center_longitude - cellDegrees / 2;
  const topLeft = project(viewport, north, west);
  const size = cellDegrees * pixelsPerDegree(viewport);
  return { x: topLeft.x, y: topLeft.y, width: size, height: size, value: cell.value };
}

/** Yellow-to-red ramp; alpha scales with relative value. */
export function heatColor(value: number, maxValue: number): string {
  if (maxValue <= 0) return "rgba(0,0,0,0)";
  const t = Math.min(1, value / maxValue);
  const red = 255;
  const green = Math.round(210 * (1 - t * 0.85));
  const alpha = 0.15 + 0.6 * t;
  return `rgba(${red},${green},40,${alpha.toFixed(3)})`;
}

export interface CircleMark {
  institutionId: string;
  name: string | null;
  x: number;
  y: number;
  radius: number;
  score: number;
}

export function circleMarks(
  viewport: Viewport,
  institutions: InstitutionResult[],
  maxRadius = MAX_CIRCLE_RADIUS_PX,
): CircleMark[] {
  const located = institutions.filter(
    (inst) => inst.latitude !== null && inst.longitude !== null,
  );
  const maxScore = located.reduce((acc, inst) => Math.max(acc, inst.score), 0);
  return located.map((inst) => {
    const { x, y } = project(viewport, inst.latitude as number, inst.longitude as number);
    return {
      institutionId: inst.institution_id,
      name: inst.name,
      x,
      y,
      radius: circleRadius(inst.score, maxScore, maxRadius),
      score: inst.score,
    };
  });
}

/** Topmost (largest-score last drawn wins is unnecessary: pick nearest hit). */
export function hitTestCircles(marks: CircleMark[], x: number, y: number): CircleMark | null {
  let best: CircleMark | null = null;
  let bestDistance = Infinity;
  for (const mark of marks) {
    const distance = Math.hypot(mark.x - x, mark.y - y);
    if (distance <= Math.max(mark.radius, 6) && distance < bestDistance) {
      best = mark;
      bestDistance = distance;
    }
  }
  return best;
}
