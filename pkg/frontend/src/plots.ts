/** Boundary-error charts: one line plot per loop (error vs arc length)
 * and the collated plot (sorted errors vs percentile) with brushing.
 */

import { DrawTarget } from "./render";
import { BoundarySection } from "./types";

export const PLOT_LINE_COLOR = "#1f77b4";
export const PLOT_AXIS_COLOR = "#888888";
export const BRUSH_COLOR = "#ff990055";

export interface PlotLayout {
  width: number;
  height: number;
  margin: number;
}

export interface PlotScale {
  toX(value: number): number;
  toY(value: number): number;
  fromX(pixel: number): number;
}

export function linearScale(
  layout: PlotLayout,
  xMin: number,
  xMax: number,
  yMin: number,
  yMax: number,
): PlotScale {
  const { width, height, margin } = layout;
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  return {
    toX: (v) => margin + ((v - xMin) / xSpan) * (width - 2 * margin),
    toY: (v) => height - margin - ((v - yMin) / ySpan) * (height - 2 * margin),
    fromX: (px) => xMin + ((px - margin) / (width - 2 * margin)) * xSpan,
  };
}

function drawPolyline(
  target: DrawTarget,
  scale: PlotScale,
  xs: number[],
  ys: number[],
): void {
  for (let i = 1; i < xs.length; i++) {
    target.line(
      scale.toX(xs[i - 1]),
      scale.toY(ys[i - 1]),
      scale.toX(xs[i]),
      scale.toY(ys[i]),
      PLOT_LINE_COLOR,
      1.5,
    );
  }
}

function drawAxes(target: DrawTarget, layout: PlotLayout, scale: PlotScale): void {
  const { width, height, margin } = layout;
  target.line(margin, height - margin, width - margin, height - margin, PLOT_AXIS_COLOR, 1);
  target.line(margin, margin, margin, height - margin, PLOT_AXIS_COLOR, 1);
  // Zero line when the y range straddles zero.
  const zeroY = scale.toY(0);
  if (zeroY > margin && zeroY < height - margin) {
    target.line(margin, zeroY, width - margin, zeroY, PLOT_AXIS_COLOR, 0.5);
  }
}

/** Error vs arc length for one loop. */
export function renderLoopPlot(
  target: DrawTarget,
  boundary: BoundarySection,
  loopId: number,
  layout: PlotLayout = { width: target.width, height: target.height, margin: 30 },
): void {
  const loop = boundary.loops[loopId];
  const yMin = Math.min(0, ...loop.errors);
  const yMax = Math.max(0, ...loop.errors);
  const scale = linearScale(
    layout, 0, loop.arclength[loop.arclength.length - 1] || 1, yMin, yMax,
  );
  drawAxes(target, layout, scale);
  drawPolyline(target, scale, loop.arclength, loop.errors);
}

/** Sorted errors vs percentile rank, with an optional brush band. */
export function renderCollatedPlot(
  target: DrawTarget,
  boundary: BoundarySection,
  brush: { lo: number; hi: number } | null,
  layout: PlotLayout = { width: target.width, height: target.height, margin: 30 },
): PlotScale {
  const { values, percentiles } = boundary.collated;
  const yMin = Math.min(0, ...values);
  const yMax = Math.max(0, ...values);
  const scale = linearScale(layout, 0, 1, yMin, yMax);
  drawAxes(target, layout, scale);
  drawPolyline(target, scale, percentiles, values);
  if (brush !== null) {
    const x0 = scale.toX(brush.lo);
    const x1 = scale.toX(brush.hi);
    for (const x of [x0, x1]) {
      target.line(x, layout.margin, x, layout.height - layout.margin, BRUSH_COLOR, 2);
    }
  }
  return scale;
}

/** Convert a pixel drag on the collated plot into a percentile range. */
export function brushFromPixels(
  scale: PlotScale,
  px0: number,
  px1: number,
): { lo: number; hi: number } {
  const a = Math.max(0, Math.min(1, scale.fromX(Math.min(px0, px1))));
  const b = Math.max(0, Math.min(1, scale.fromX(Math.max(px0, px1))));
  return { lo: a, hi: b };
}
