/** Parsing and validation of scene / compare documents.
 *
 * The viewer is a pure consumer: documents are deep-frozen after
 * parsing and never mutated.
 */

import {
  CompareDocument,
  Document,
  SceneDocument,
  SCHEMA_VERSION,
} from "./types";

export class DocumentError extends Error {}

function expect(condition: boolean, message: string): asserts condition {
  if (!condition) {
    throw new DocumentError(message);
  }
}

function isNumberArray(value: unknown): value is number[] {
  return Array.isArray(value) && value.every((x) => typeof x === "number");
}

function deepFreeze<T>(value: T): T {
  if (value !== null && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

function validateScene(doc: Record<string, unknown>): SceneDocument {
  const mesh = doc.mesh as Record<string, unknown>;
  expect(typeof mesh === "object" && mesh !== null, "missing mesh section");
  expect(
    mesh.dimension === 2 || mesh.dimension === 3,
    `mesh.dimension must be 2 or 3, got ${mesh.dimension}`,
  );
  expect(isNumberArray(mesh.positions), "mesh.positions must be numbers");
  expect(isNumberArray(mesh.cells), "mesh.cells must be numbers");
  expect(isNumberArray(mesh.edges), "mesh.edges must be numbers");
  const nVertices = mesh.vertex_count as number;
  expect(
    mesh.positions.length === 3 * nVertices,
    "mesh.positions length must be 3 * vertex_count",
  );
  const arity = mesh.arity as number;
  expect(
    mesh.cells.length === arity * (mesh.cell_count as number),
    "mesh.cells length must be arity * cell_count",
  );

  const quality = doc.quality as Record<string, unknown>;
  expect(typeof quality === "object" && quality !== null, "missing quality section");
  expect(
    isNumberArray(quality.vertex_quality) &&
      quality.vertex_quality.length === nVertices,
    "quality.vertex_quality must hold one value per vertex",
  );

  const glyphs = doc.glyphs as Record<string, unknown>;
  expect(typeof glyphs === "object" && glyphs !== null, "missing glyphs section");
  expect(Array.isArray(glyphs.displayed), "glyphs.displayed must be an array");
  expect(Array.isArray(glyphs.clusters), "glyphs.clusters must be an array");

  const features = doc.feature_edges as Record<string, unknown>;
  expect(
    typeof features === "object" && features !== null && isNumberArray(features.emphasized),
    "missing feature_edges section",
  );
  const nEdges = mesh.edges.length / 2;
  expect(
    features.emphasized.every((e) => Number.isInteger(e) && e >= 0 && e < nEdges),
    "feature_edges.emphasized must index mesh.edges",
  );

  const overlaps = doc.overlaps as Record<string, unknown>;
  expect(
    typeof overlaps === "object" && overlaps !== null && Array.isArray(overlaps.arrows),
    "missing overlaps section",
  );

  const boundary = doc.boundary as Record<string, unknown> | null;
  if (boundary !== null) {
    expect(typeof boundary === "object", "boundary must be an object or null");
    expect(boundary.mode === "2d" || boundary.mode === "3d", "boundary.mode must be 2d or 3d");
    const collated = boundary.collated as Record<string, unknown>;
    expect(
      typeof collated === "object" && collated !== null,
      "boundary.collated missing",
    );
    expect(
      isNumberArray(collated.values) &&
        isNumberArray(collated.percentiles) &&
        isNumberArray(collated.vertices),
      "boundary.collated arrays malformed",
    );
    expect(
      collated.values.length === collated.percentiles.length &&
        collated.values.length === collated.vertices.length,
      "boundary.collated arrays must align",
    );
    for (let i = 1; i < collated.values.length; i++) {
      expect(
        collated.values[i] >= collated.values[i - 1],
        "boundary.collated.values must be ascending",
      );
    }
  }
  return doc as unknown as SceneDocument;
}

export function parseDocument(text: string): Document {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new DocumentError(`not valid JSON: ${(err as Error).message}`);
  }
  expect(typeof raw === "object" && raw !== null, "document must be an object");
  const doc = raw as Record<string, unknown>;
  expect(
    doc.schema_version === SCHEMA_VERSION,
    `unsupported schema_version ${doc.schema_version}`,
  );
  if (doc.kind === "compare") {
    const scenes = doc.scenes as unknown[];
    expect(Array.isArray(scenes) && scenes.length === 2, "compare needs two scenes");
    for (const scene of scenes) {
      validateScene(scene as Record<string, unknown>);
    }
    expect(Array.isArray(doc.labels) && doc.labels.length === 2, "compare needs two labels");
    return deepFreeze(doc as unknown as CompareDocument);
  }
  expect(doc.kind === "scene", `unknown document kind ${doc.kind}`);
  return deepFreeze(validateScene(doc));
}

export function isCompare(doc: Document): doc is CompareDocument {
  return doc.kind === "compare";
}
