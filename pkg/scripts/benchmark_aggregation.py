"""Time the aggregated-glyph pipeline on a synthetic degraded hex grid.

    python3 scripts/benchmark_aggregation.py --nx 50 --ny 25 --nz 20
"""

import argparse
import time

import numpy as np

from hqview.glyphs import build_glyphs, cluster_glyphs, default_params
from hqview.mesh_io import build_adjacency
from hqview.quality import compute_quality_field
from hqview.synth import degrade_vertices, hex_grid


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nx", type=int, default=50)
    parser.add_argument("--ny", type=int, default=25)
    parser.add_argument("--nz", type=int, default=20)
    parser.add_argument("--fraction", type=float, default=0.05,
                        help="fraction of vertices to displace")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    mesh = degrade_vertices(hex_grid(args.nx, args.ny, args.nz), args.fraction, rng)
    print(f"mesh: {mesh.n_cells} cells, {mesh.n_vertices} vertices")

    stages = []
    t0 = last = time.perf_counter()

    def mark(label):
        nonlocal last
        now = time.perf_counter()
        stages.append((label, now - last))
        last = now

    adjacency = build_adjacency(mesh)
    mark("adjacency")
    field = compute_quality_field(mesh, adjacency)
    mark("quality")
    params = default_params(adjacency)
    glyphs = build_glyphs(field, mesh, params)
    mark("glyphs")
    clusters = cluster_glyphs(glyphs)
    mark("clustering")

    for label, dt in stages:
        print(f"  {label:<12} {dt:8.3f} s")
    print(f"total {time.perf_counter() - t0:8.3f} s, "
          f"{len(glyphs)} displayed glyphs, {len(clusters)} clusters")


if __name__ == "__main__":
    main()
