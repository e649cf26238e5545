/** View state: one active selection, camera pose, layer toggles.
 *
 * State objects are immutable; every transition returns a new state so
 * panels can compare references to detect changes.
 */

import { SceneDocument } from "./types";

export type Selection =
  | { kind: "none" }
  | { kind: "cluster"; clusterId: number }
  | { kind: "vertex"; vertex: number }
  | { kind: "boundary-range"; lo: number; hi: number }
  | { kind: "loop"; loopId: number };

export interface Camera {
  /** Center of the view in world coordinates. */
  center: [number, number, number];
  /** World units per pixel. */
  scale: number;
  /** Rotation about the vertical axis, radians (3D only). */
  yaw: number;
  /** Rotation about the horizontal axis, radians (3D only). */
  pitch: number;
}

export interface Toggles {
  glyphs: boolean;
  featureEdges: boolean;
  arrows: boolean;
  wireframe: boolean;
}

export interface ViewState {
  selection: Selection;
  camera: Camera;
  toggles: Toggles;
}

export function initialCamera(scene: SceneDocument): Camera {
  const lo = scene.mesh.bbox_min;
  const hi = scene.mesh.bbox_max;
  return {
    center: [
      (lo[0] + hi[0]) / 2,
      (lo[1] + hi[1]) / 2,
      (lo[2] + hi[2]) / 2,
    ],
    scale: scene.mesh.diagonal > 0 ? scene.mesh.diagonal / 400 : 1 / 400,
    yaw: 0,
    pitch: 0,
  };
}

export function initialState(scene: SceneDocument): ViewState {
  return {
    selection: { kind: "none" },
    camera: initialCamera(scene),
    toggles: { glyphs: true, featureEdges: true, arrows: true, wireframe: true },
  };
}

function withSelection(state: ViewState, selection: Selection): ViewState {
  return { ...state, selection };
}

export function selectCluster(
  state: ViewState,
  scene: SceneDocument,
  clusterId: number,
): ViewState {
  if (!scene.glyphs.clusters.some((c) => c.id === clusterId)) {
    throw new RangeError(`cluster ${clusterId} not in document`);
  }
  return withSelection(state, { kind: "cluster", clusterId });
}

export function selectVertex(
  state: ViewState,
  scene: SceneDocument,
  vertex: number,
): ViewState {
  if (!Number.isInteger(vertex) || vertex < 0 || vertex >= scene.mesh.vertex_count) {
    throw new RangeError(`vertex ${vertex} not in document`);
  }
  return withSelection(state, { kind: "vertex", vertex });
}

export function brushBoundaryRange(
  state: ViewState,
  scene: SceneDocument,
  lo: number,
  hi: number,
): ViewState {
  if (scene.boundary === null) {
    throw new RangeError("document has no boundary section");
  }
  if (!(lo >= 0 && hi <= 1 && lo <= hi)) {
    throw new RangeError(`invalid percentile range [${lo}, ${hi}]`);
  }
  return withSelection(state, { kind: "boundary-range", lo, hi });
}

export function selectLoop(
  state: ViewState,
  scene: SceneDocument,
  loopId: number,
): ViewState {
  if (scene.boundary === null || loopId < 0 || loopId >= scene.boundary.loops.length) {
    throw new RangeError(`loop ${loopId} not in document`);
  }
  return withSelection(state, { kind: "loop", loopId });
}

export function clearSelection(state: ViewState): ViewState {
  return withSelection(state, { kind: "none" });
}

export function setToggle(
  state: ViewState,
  name: keyof Toggles,
  value: boolean,
): ViewState {
  return { ...state, toggles: { ...state.toggles, [name]: value } };
}

export function panCamera(state: ViewState, dx: number, dy: number): ViewState {
  const { center, scale } = state.camera;
  return {
    ...state,
    camera: {
      ...state.camera,
      center: [center[0] - dx * scale, center[1] + dy * scale, center[2]],
    },
  };
}

export function zoomCamera(state: ViewState, factor: number): ViewState {
  if (!(factor > 0)) {
    throw new RangeError("zoom factor must be positive");
  }
  return { ...state, camera: { ...state.camera, scale: state.camera.scale / factor } };
}

export function orbitCamera(state: ViewState, dyaw: number, dpitch: number): ViewState {
  const pitch = Math.max(
    -Math.PI / 2,
    Math.min(Math.PI / 2, state.camera.pitch + dpitch),
  );
  return {
    ...state,
    camera: { ...state.camera, yaw: state.camera.yaw + dyaw, pitch },
  };
}
