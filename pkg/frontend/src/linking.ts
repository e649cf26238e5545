/** Selection resolution: every panel derives its highlight set from the
 * same function, so linked views can never disagree.
 */

import { Selection } from "./state";
import { BoundarySection, SceneDocument } from "./types";

/** Vertex ids whose collated percentile falls inside [lo, hi]. */
export function brushedVertices(
  boundary: BoundarySection,
  lo: number,
  hi: number,
): Set<number> {
  const out = new Set<number>();
  const { percentiles, vertices } = boundary.collated;
  for (let i = 0; i < percentiles.length; i++) {
    if (percentiles[i] >= lo && percentiles[i] <= hi) {
      out.add(vertices[i]);
    }
  }
  return out;
}

/** Vertex ids on one boundary loop. */
export function loopVertices(boundary: BoundarySection, loopId: number): Set<number> {
  return new Set(boundary.loops[loopId].vertices);
}

/** Member vertex ids of one glyph cluster. */
export function clusterVertices(scene: SceneDocument, clusterId: number): Set<number> {
  const cluster = scene.glyphs.clusters.find((c) => c.id === clusterId);
  if (cluster === undefined) {
    throw new RangeError(`cluster ${clusterId} not in document`);
  }
  return new Set(cluster.members);
}

/** The single highlight set all panels share for the active selection. */
export function highlightedVertices(
  scene: SceneDocument,
  selection: Selection,
): Set<number> {
  switch (selection.kind) {
    case "none":
      return new Set();
    case "vertex":
      return new Set([selection.vertex]);
    case "cluster":
      return clusterVertices(scene, selection.clusterId);
    case "boundary-range":
      if (scene.boundary === null) {
        return new Set();
      }
      return brushedVertices(scene.boundary, selection.lo, selection.hi);
    case "loop":
      if (scene.boundary === null) {
        return new Set();
      }
      return loopVertices(scene.boundary, selection.loopId);
  }
}

/** Cells incident to any of the given vertices (sub-region drill-down). */
export function incidentCells(scene: SceneDocument, vertices: Set<number>): number[] {
  const { cells, arity } = scene.mesh;
  const out: number[] = [];
  for (let c = 0; c < scene.mesh.cell_count; c++) {
    for (let k = 0; k < arity; k++) {
      if (vertices.has(cells[c * arity + k])) {
        out.push(c);
        break;
      }
    }
  }
  return out;
}

/** One-ring of a vertex: its incident cells. */
export function oneRingCells(scene: SceneDocument, vertex: number): number[] {
  return incidentCells(scene, new Set([vertex]));
}
