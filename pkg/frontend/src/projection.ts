/** Orthographic camera projection shared by all panes. */

import { Camera } from "./state";

export interface ScreenPoint {
  x: number;
  y: number;
  depth: number;
}

export function project(
  camera: Camera,
  width: number,
  height: number,
  p: [number, number, number],
): ScreenPoint {
  const dx = p[0] - camera.center[0];
  const dy = p[1] - camera.center[1];
  const dz = p[2] - camera.center[2];

  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const x1 = cy * dx + sy * dz;
  const z1 = -sy * dx + cy * dz;

  const cp = Math.cos(camera.pitch);
  const sp = Math.sin(camera.pitch);
  const y2 = cp * dy - sp * z1;
  const z2 = sp * dy + cp * z1;

  return {
    x: width / 2 + x1 / camera.scale,
    y: height / 2 - y2 / camera.scale,
    depth: z2,
  };
}

/** Screen radius of a world-space sphere; proportional to its radius. */
export function projectRadius(camera: Camera, radius: number): number {
  return radius / camera.scale;
}
