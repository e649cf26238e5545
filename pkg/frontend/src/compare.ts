/** Compare mode: two panes over one shared camera.
 *
 * Each scene keeps its own selection but camera moves apply to both
 * panes, so the meshes stay aligned while orbiting or zooming.
 */

import { DrawTarget, renderScene } from "./render";
import {
  Camera,
  initialCamera,
  initialState,
  orbitCamera,
  panCamera,
  ViewState,
  zoomCamera,
} from "./state";
import { CompareDocument } from "./types";

export interface CompareState {
  panes: [ViewState, ViewState];
  synced: boolean;
}

export function initialCompareState(doc: CompareDocument): CompareState {
  const a = initialState(doc.scenes[0]);
  const b = initialState(doc.scenes[1]);
  const synced = doc.camera_hints.sync;
  // Under sync both panes start from pane A's framing.
  return {
    panes: [a, synced ? { ...b, camera: a.camera } : b],
    synced,
  };
}

function applyToCameras(
  state: CompareState,
  pane: 0 | 1,
  move: (s: ViewState) => ViewState,
): CompareState {
  if (!state.synced) {
    const panes: [ViewState, ViewState] = [...state.panes];
    panes[pane] = move(panes[pane]);
    return { ...state, panes };
  }
  const moved = move(state.panes[pane]);
  const other = state.panes[1 - pane];
  const panes: [ViewState, ViewState] = [
    { ...state.panes[0], camera: moved.camera },
    { ...state.panes[1], camera: moved.camera },
  ];
  panes[pane] = moved;
  panes[1 - pane] = { ...other, camera: moved.camera };
  return { ...state, panes };
}

export function comparePan(
  state: CompareState, pane: 0 | 1, dx: number, dy: number,
): CompareState {
  return applyToCameras(state, pane, (s) => panCamera(s, dx, dy));
}

export function compareZoom(
  state: CompareState, pane: 0 | 1, factor: number,
): CompareState {
  return applyToCameras(state, pane, (s) => zoomCamera(s, factor));
}

export function compareOrbit(
  state: CompareState, pane: 0 | 1, dyaw: number, dpitch: number,
): CompareState {
  return applyToCameras(state, pane, (s) => orbitCamera(s, dyaw, dpitch));
}

export function resetCompareCameras(
  state: CompareState, doc: CompareDocument,
): CompareState {
  const camera: Camera = initialCamera(doc.scenes[0]);
  return {
    ...state,
    panes: [
      { ...state.panes[0], camera },
      { ...state.panes[1], camera },
    ],
  };
}

export function renderCompare(
  targets: [DrawTarget, DrawTarget],
  doc: CompareDocument,
  state: CompareState,
): void {
  renderScene(targets[0], doc.scenes[0], state.panes[0]);
  renderScene(targets[1], doc.scenes[1], state.panes[1]);
}
