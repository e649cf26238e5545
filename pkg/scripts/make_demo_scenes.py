"""Generate demo scene documents for the browser viewer.

Writes a set of JSON scenes covering the analysis modes: a clean grid, a
degraded grid with clusters and feature edges, an overlap fixture, a 2D
boundary-error scene with three loops, a 3D boundary-error scene, and a
compare document.

    python3 scripts/make_demo_scenes.py --out frontend/scenes
"""

import argparse
import os

import numpy as np

from hqview.cli import main as cli_main
from hqview.mesh_io import Mesh, write_mesh
from hqview.synth import degrade_vertices, hex_grid, merge_meshes, quad_grid


def _cube_obj(path):
    verts = [
        (0, 0, 0), (3, 0, 0), (3, 3, 0), (0, 3, 0),
        (0, 0, 3), (3, 0, 3), (3, 3, 3), (0, 3, 3),
    ]
    quads = [
        (1, 4, 3, 2), (5, 6, 7, 8), (1, 2, 6, 5),
        (2, 3, 7, 6), (3, 4, 8, 7), (4, 1, 5, 8),
    ]
    with open(path, "w") as fh:
        for v in verts:
            fh.write("v %g %g %g\n" % v)
        for q in quads:
            fh.write("f %d %d %d %d\n" % q)


def _three_loop_mesh():
    base = merge_meshes(
        quad_grid(4, 4, holes=((1, 1),)),
        quad_grid(1, 1, spacing=0.5),
        name="loops",
    )
    verts = base.vertices.copy()
    verts[-4:] += np.array([6.0, 0.0, 0.0])
    return Mesh(dimension=2, vertices=verts, cells=base.cells, name="loops")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="frontend/scenes")
    parser.add_argument("--seed", type=int, default=2)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    meshes = os.path.join(args.out, "meshes")
    os.makedirs(meshes, exist_ok=True)

    rng = np.random.default_rng(args.seed)

    clean = hex_grid(3, 3, 3, name="clean")
    clean_path = os.path.join(meshes, "clean.vtk")
    write_mesh(clean, clean_path)

    degraded = degrade_vertices(hex_grid(6, 6, 6, name="degraded"), 0.12, rng)
    degraded_path = os.path.join(meshes, "degraded.vtk")
    write_mesh(degraded, degraded_path)

    cube = np.array(
        [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
         [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]], float)
    overlap = Mesh(
        dimension=3,
        vertices=np.vstack([cube, cube + 0.5]),
        cells=np.array([np.arange(8), np.arange(8, 16)]),
        name="overlap",
    )
    overlap_path = os.path.join(meshes, "overlap.vtk")
    write_mesh(overlap, overlap_path)

    loops = _three_loop_mesh()
    loops_path = os.path.join(meshes, "loops.vtk")
    write_mesh(loops, loops_path)
    warped = Mesh(
        dimension=2,
        vertices=loops.vertices + np.pad(
            rng.uniform(-0.08, 0.08, (loops.n_vertices, 2)), ((0, 0), (0, 1))
        ),
        cells=loops.cells,
        name="loops",
    )
    warped_path = os.path.join(meshes, "loops_warped.vtk")
    write_mesh(warped, warped_path)

    box = hex_grid(3, 3, 3, name="box")
    box_path = os.path.join(meshes, "box.vtk")
    write_mesh(box, box_path)
    obj_path = os.path.join(meshes, "box.obj")
    _cube_obj(obj_path)

    jobs = [
        ["analyze", "-m", clean_path, "-o", os.path.join(args.out, "clean.json")],
        ["analyze", "-m", degraded_path, "-o", os.path.join(args.out, "degraded.json")],
        ["analyze", "-m", overlap_path, "-o", os.path.join(args.out, "overlap.json")],
        ["boundary", "--original", warped_path, "--reference", loops_path,
         "-o", os.path.join(args.out, "boundary2d.json")],
        ["boundary", "--original", box_path, "--reference", obj_path,
         "-o", os.path.join(args.out, "boundary3d.json")],
        ["compare", "--mesh-a", degraded_path, "--mesh-b", clean_path,
         "--label-a", "degraded", "--label-b", "clean",
         "-o", os.path.join(args.out, "compare.json")],
    ]
    for argv in jobs:
        code = cli_main(argv)
        if code != 0:
            raise SystemExit(f"command failed ({code}): {argv}")
    print(f"wrote {len(jobs)} scenes to {args.out}")


if __name__ == "__main__":
    main()
