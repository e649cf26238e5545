/** Scene document shapes, mirroring the JSON exported by the hqview CLI. */

export const SCHEMA_VERSION = 1;

export interface MeshSection {
  dimension: 2 | 3;
  arity: number;
  vertex_count: number;
  cell_count: number;
  positions: number[]; // flat, 3 per vertex
  cells: number[]; // flat, arity per cell
  edges: number[]; // flat, 2 per edge
  boundary_quads: number[]; // flat, 4 per quad (3D only)
  average_edge_length: number;
  bbox_min: number[];
  bbox_max: number[];
  diagonal: number;
}

export interface HistogramSection {
  bin_edges: number[];
  counts: number[];
}

export interface QualitySection {
  vertex_quality: number[];
  corner_offsets: number[]; // CSR offsets, one slice per vertex
  corner_cells: number[];
  corner_values: number[];
  q_m: number;
  worst: number;
  histogram: HistogramSection;
  sorted_vertices: number[];
}

export interface GlyphRecord {
  vertex: number;
  center: number[];
  c: number;
  radius: number;
}

export interface ClusterRecord {
  id: number;
  members: number[];
  representative: number;
  radius: number;
  worst_quality: number;
  member_count: number;
  color_index: number;
}

export interface GlyphSection {
  params: { r_max: number; r_dmin: number };
  displayed: GlyphRecord[];
  clusters: ClusterRecord[];
}

export interface FeatureEdgeSection {
  e_qmax: number;
  emphasized: number[]; // edge indices into mesh.edges
}

export interface ArrowRecord {
  vertex: number;
  direction: number[];
  angle_deg: number;
}

export interface OverlapSection {
  vertex_pairs: [number, number, number][];
  containments: [number, number][];
  arrows: ArrowRecord[];
}

export interface BoundaryLoop {
  vertices: number[];
  arclength: number[];
  errors: number[];
}

export interface BoundaryRecord {
  vertex: number;
  closest: number[];
  error: number;
}

export interface CollatedSection {
  values: number[]; // ascending
  percentiles: number[]; // 0..1, aligned with values
  vertices: number[]; // vertex id per value
}

export interface BoundarySection {
  mode: "2d" | "3d";
  signed: boolean;
  diag_reference: number;
  loops: BoundaryLoop[];
  records: BoundaryRecord[];
  collated: CollatedSection;
  uv: number[] | null;
  surface_quads: number[];
}

export interface SceneDocument {
  schema_version: number;
  kind: "scene";
  model: string;
  mesh: MeshSection;
  quality: QualitySection;
  glyphs: GlyphSection;
  feature_edges: FeatureEdgeSection;
  overlaps: OverlapSection;
  boundary: BoundarySection | null;
  provenance: Record<string, unknown>;
}

export interface CompareDocument {
  schema_version: number;
  kind: "compare";
  model: string;
  labels: [string, string];
  scenes: [SceneDocument, SceneDocument];
  camera_hints: { sync: boolean };
}

export type Document = SceneDocument | CompareDocument;
