/** Canvas 2D rendering of one scene pane.
 *
 * Glyph spheres are drawn as filled circles (camera-facing impostors)
 * and overlap arrows as 2D overlays, re-projected every frame. The
 * drawing surface is abstracted behind a small interface so tests can
 * record draw calls headlessly.
 */

import { highlightedVertices } from "./linking";
import { project, projectRadius } from "./projection";
import { ViewState } from "./state";
import { SceneDocument } from "./types";

export const CLUSTER_PALETTE: readonly string[] = [
  "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4",
  "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff",
];

export const WIREFRAME_COLOR = "#b0b0b0";
export const FEATURE_EDGE_COLOR = "#d62728";
export const HIGHLIGHT_COLOR = "#ff9900";
export const ARROW_COLOR = "#222222";

/** The subset of CanvasRenderingContext2D the renderer needs. */
export interface DrawTarget {
  width: number;
  height: number;
  line(x0: number, y0: number, x1: number, y1: number, color: string, width: number): void;
  circle(x: number, y: number, radius: number, fill: string, stroke?: string): void;
}

function vertexPosition(scene: SceneDocument, v: number): [number, number, number] {
  const p = scene.mesh.positions;
  return [p[3 * v], p[3 * v + 1], p[3 * v + 2]];
}

function drawEdges(
  target: DrawTarget,
  scene: SceneDocument,
  state: ViewState,
  indices: Iterable<number>,
  color: string,
  width: number,
): void {
  const edges = scene.mesh.edges;
  for (const e of indices) {
    const a = project(state.camera, target.width, target.height,
      vertexPosition(scene, edges[2 * e]));
    const b = project(state.camera, target.width, target.height,
      vertexPosition(scene, edges[2 * e + 1]));
    target.line(a.x, a.y, b.x, b.y, color, width);
  }
}

export function renderScene(
  target: DrawTarget,
  scene: SceneDocument,
  state: ViewState,
): void {
  const nEdges = scene.mesh.edges.length / 2;
  const emphasized = new Set(scene.feature_edges.emphasized);

  if (state.toggles.wireframe) {
    const plain: number[] = [];
    for (let e = 0; e < nEdges; e++) {
      if (!state.toggles.featureEdges || !emphasized.has(e)) {
        plain.push(e);
      }
    }
    drawEdges(target, scene, state, plain, WIREFRAME_COLOR, 1);
  }
  if (state.toggles.featureEdges) {
    drawEdges(target, scene, state, emphasized, FEATURE_EDGE_COLOR, 2);
  }

  if (state.toggles.glyphs) {
    // One sphere per cluster, at its representative member, sized by
    // the aggregated radius; sorted far-to-near for painter's order.
    const drawn = scene.glyphs.clusters
      .map((cluster) => {
        const glyph = scene.glyphs.displayed.find(
          (g) => g.vertex === cluster.representative,
        );
        const center = glyph !== undefined
          ? (glyph.center as [number, number, number])
          : vertexPosition(scene, cluster.representative);
        const p = project(state.camera, target.width, target.height, center);
        return { cluster, p };
      })
      .sort((a, b) => b.p.depth - a.p.depth);
    for (const { cluster, p } of drawn) {
      const selected =
        state.selection.kind === "cluster" &&
        state.selection.clusterId === cluster.id;
      target.circle(
        p.x,
        p.y,
        projectRadius(state.camera, cluster.radius),
        CLUSTER_PALETTE[cluster.color_index],
        selected ? HIGHLIGHT_COLOR : undefined,
      );
    }
  }

  if (state.toggles.arrows) {
    const arrowLength = 18;
    for (const arrow of scene.overlaps.arrows) {
      const base = project(state.camera, target.width, target.height,
        vertexPosition(scene, arrow.vertex));
      const tip = project(state.camera, target.width, target.height, [
        vertexPosition(scene, arrow.vertex)[0] + arrow.direction[0],
        vertexPosition(scene, arrow.vertex)[1] + arrow.direction[1],
        vertexPosition(scene, arrow.vertex)[2] + arrow.direction[2],
      ]);
      const dx = tip.x - base.x;
      const dy = tip.y - base.y;
      const norm = Math.hypot(dx, dy) || 1;
      target.line(
        base.x + (dx / norm) * arrowLength,
        base.y + (dy / norm) * arrowLength,
        base.x,
        base.y,
        ARROW_COLOR,
        2,
      );
    }
  }

  const highlighted = highlightedVertices(scene, state.selection);
  for (const v of highlighted) {
    const p = project(state.camera, target.width, target.height,
      vertexPosition(scene, v));
    target.circle(p.x, p.y, 4, HIGHLIGHT_COLOR);
  }
}

/** Recording draw target used by tests and by hit-testing. */
export class RecordingTarget implements DrawTarget {
  lines: { x0: number; y0: number; x1: number; y1: number; color: string; width: number }[] = [];
  circles: { x: number; y: number; radius: number; fill: string; stroke?: string }[] = [];

  constructor(public width: number = 800, public height: number = 600) {}

  line(x0: number, y0: number, x1: number, y1: number, color: string, width: number): void {
    this.lines.push({ x0, y0, x1, y1, color, width });
  }

  circle(x: number, y: number, radius: number, fill: string, stroke?: string): void {
    this.circles.push({ x, y, radius, fill, stroke });
  }
}

/** Adapter from DrawTarget onto a real canvas context. */
export class CanvasTarget implements DrawTarget {
  constructor(
    private ctx: CanvasRenderingContext2D,
    public width: number,
    public height: number,
  ) {}

  line(x0: number, y0: number, x1: number, y1: number, color: string, width: number): void {
    this.ctx.strokeStyle = color;
    this.ctx.lineWidth = width;
    this.ctx.beginPath();
    this.ctx.moveTo(x0, y0);
    this.ctx.lineTo(x1, y1);
    this.ctx.stroke();
  }

  circle(x: number, y: number, radius: number, fill: string, stroke?: string): void {
    this.ctx.fillStyle = fill;
    this.ctx.beginPath();
    this.ctx.arc(x, y, Math.max(radius, 0.5), 0, 2 * Math.PI);
    this.ctx.fill();
    if (stroke !== undefined) {
      this.ctx.strokeStyle = stroke;
      this.ctx.lineWidth = 2;
      this.ctx.stroke();
    }
  }
}
