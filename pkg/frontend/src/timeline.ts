// Brushable timeline: one bar per year, height driven by the server's
// `relative` field (the UI never recomputes salience).

import type { TimelineBucket } from "./types.js";

export interface BarLayout {
  year: number;
  x: number;
  width: number;
  height: number; // px, = relative * plotHeight
  relative: number;
}

export function barLayout(
  buckets: TimelineBucket[],
  plotWidth: number,
  plotHeight: number,
): BarLayout[] {
  if (buckets.length === 0) return [];
  const step = plotWidth / buckets.length;
  return buckets.map((bucket, i) => ({
    year: bucket.year,
    x: i * step,
    width: Math.max(1, step - 1),
    height: bucket.relative * plotHeight,
    relative: bucket.relative,
  }));
}

export function yearAtX(buckets: TimelineBucket[], plotWidth: number, x: number): number | null {
  if (buckets.length === 0) return null;
  const index = Math.floor((x / plotWidth) * buckets.length);
  const clamped = Math.min(buckets.length - 1, Math.max(0, index));
  return buckets[clamped].year;
}

export interface TimelineCallbacks {
  onBrush: (yearFrom: number, yearTo: number) => void;
  onClear: () => void;
}

export interface TimelineController {
  render(buckets: TimelineBucket[], brush: [number, number] | null): void;
  element: HTMLElement;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function createTimeline(
  doc: Document,
  callbacks: TimelineCallbacks,
  width = 720,
  height = 80,
): TimelineController {
  const wrapper = doc.createElement("div");
  wrapper.className = "timeline";
  const svg = doc.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height + 18));
  wrapper.appendChild(svg);

  let buckets: TimelineBucket[] = [];
  let dragStart: number | null = null;

  function render(nextBuckets: TimelineBucket[], brush: [number, number] | null): void {
    buckets = nextBuckets;
    while (svg.firstChild) svg.removeChild(svg.firstChild);
    const bars = barLayout(buckets, width, height);
    for (const bar of bars) {
      const inBrush =
        brush === null || (bar.year >= brush[0] && bar.year <= brush[1]);
      const rect = doc.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", bar.x.toFixed(1));
      rect.setAttribute("y", (height - bar.height).toFixed(1));
      rect.setAttribute("width", bar.width.toFixed(1));
      rect.setAttribute("height", Math.max(0.5, bar.height).toFixed(1));
      rect.setAttribute("class", inBrush ? "bar" : "bar bar-out");
      rect.setAttribute("data-year", String(bar.year));
      rect.setAttribute("data-relative", bar.relative.toFixed(6));
      svg.appendChild(rect);
    }
    if (bars.length > 0) {
      const first = doc.createElementNS(SVG_NS, "text");
      first.setAttribute("x", "0");
      first.setAttribute("y", String(height + 14));
      first.setAttribute("class", "tick");
      first.textContent = String(bars[0].year);
      svg.appendChild(first);
      const last = doc.createElementNS(SVG_NS, "text");
      last.setAttribute("x", String(width - 34));
      last.setAttribute("y", String(height + 14));
      last.setAttribute("class", "tick");
      last.textContent = String(bars[bars.length - 1].year);
      svg.appendChild(last);
    }
  }

  function pointerYear(event: MouseEvent): number | null {
    const bounds = (svg as unknown as { getBoundingClientRect?: () => DOMRect }).getBoundingClientRect;
    const left = bounds ? bounds.call(svg).left : 0;
    return yearAtX(buckets, width, event.clientX - left);
  }

  svg.addEventListener("mousedown", (event) => {
    dragStart = pointerYear(event as MouseEvent);
  });
  svg.addEventListener("mouseup", (event) => {
    const end = pointerYear(event as MouseEvent);
    if (dragStart !== null && end !== null) {
      if (dragStart === end) {
        callbacks.onBrush(end, end);
      } else {
        callbacks.onBrush(Math.min(dragStart, end), Math.max(dragStart, end));
      }
    }
    dragStart = null;
  });
  svg.addEventListener("dblclick", () => callbacks.onClear());

  return { render, element: wrapper };
}
