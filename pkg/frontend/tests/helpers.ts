import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { parseDocument } from "../src/document";
import { CompareDocument, Document, SceneDocument } from "../src/types";

export const SCENES_DIR = join(__dirname, "..", "scenes");

export function sceneFiles(): string[] {
  return readdirSync(SCENES_DIR)
    .filter((name) => name.endsWith(".json"))
    .sort();
}

export function loadDocument(name: string): Document {
  return parseDocument(readFileSync(join(SCENES_DIR, name), "utf8"));
}

export function loadScene(name: string): SceneDocument {
  const doc = loadDocument(name);
  if (doc.kind !== "scene") {
    throw new Error(`${name} is not a scene document`);
  }
  return doc;
}

export function loadCompare(name: string): CompareDocument {
  const doc = loadDocument(name);
  if (doc.kind !== "compare") {
    throw new Error(`${name} is not a compare document`);
  }
  return doc;
}
