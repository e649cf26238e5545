/** Cluster drill-down: sub-region cells, one-ring, per-corner chart.
 *
 * All data comes straight out of the document; no quality values are
 * recomputed in the viewer.
 */

import { clusterVertices, incidentCells, oneRingCells } from "./linking";
import { SceneDocument } from "./types";

export interface CornerBar {
  cell: number;
  value: number;
}

export interface SubRegionPanel {
  cells: number[];
  vertices: number[];
}

export interface OneRingPanel {
  vertex: number;
  cells: number[];
  corners: CornerBar[];
}

function verticesOfCells(scene: SceneDocument, cellIds: number[]): number[] {
  const { cells, arity } = scene.mesh;
  const seen = new Set<number>();
  for (const c of cellIds) {
    for (let k = 0; k < arity; k++) {
      seen.add(cells[c * arity + k]);
    }
  }
  return [...seen].sort((a, b) => a - b);
}

/** Cells and vertices behind one aggregated glyph. */
export function subRegion(scene: SceneDocument, clusterId: number): SubRegionPanel {
  const members = clusterVertices(scene, clusterId);
  const cells = incidentCells(scene, members);
  return { cells, vertices: verticesOfCells(scene, cells) };
}

/** Per-corner Jacobian bars for one vertex, ordered by cell id. */
export function cornerChart(scene: SceneDocument, vertex: number): CornerBar[] {
  const { corner_offsets, corner_cells, corner_values } = scene.quality;
  if (vertex < 0 || vertex + 1 >= corner_offsets.length) {
    throw new RangeError(`vertex ${vertex} not in document`);
  }
  const bars: CornerBar[] = [];
  for (let i = corner_offsets[vertex]; i < corner_offsets[vertex + 1]; i++) {
    bars.push({ cell: corner_cells[i], value: corner_values[i] });
  }
  return bars;
}

/** One-ring cells plus the corner chart for a clicked vertex. */
export function oneRing(scene: SceneDocument, vertex: number): OneRingPanel {
  return {
    vertex,
    cells: oneRingCells(scene, vertex),
    corners: cornerChart(scene, vertex),
  };
}
