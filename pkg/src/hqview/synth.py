"""Synthetic meshes for experiments and tests."""

from __future__ import annotations

import numpy as np

from .mesh_io import Mesh, ReferenceSurface


def hex_grid(nx: int, ny: int, nz: int, spacing: float = 1.0, name: str = "grid") -> Mesh:
    """Axis-aligned grid of nx*ny*nz unit hexes (VTK corner order)."""
    xs = np.arange(nx + 1) * spacing
    ys = np.arange(ny + 1) * spacing
    zs = np.arange(nz + 1) * spacing
    gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
    verts = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)

    def vid(i, j, k):
        return (i * (ny + 1) + j) * (nz + 1) + k

    cells = []
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                cells.append(
                    [
                        vid(i, j, k),
                        vid(i + 1, j, k),
                        vid(i + 1, j + 1, k),
                        vid(i, j + 1, k),
                        vid(i, j, k + 1),
                        vid(i + 1, j, k + 1),
                        vid(i + 1, j + 1, k + 1),
                        vid(i, j + 1, k + 1),
                    ]
                )
    return Mesh(dimension=3, vertices=verts, cells=np.array(cells), name=name)


def quad_grid(
    nx: int,
    ny: int,
    spacing: float = 1.0,
    holes: tuple = (),
    name: str = "quadgrid",
) -> Mesh:
    """nx*ny quad grid; ``holes`` lists (i, j) cells to omit."""
    xs = np.arange(nx + 1) * spacing
    ys = np.arange(ny + 1) * spacing
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    verts = np.stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)], axis=1)

    def vid(i, j):
        return i * (ny + 1) + j

    hole_set = set(holes)
    cells = []
    for i in range(nx):
        for j in range(ny):
            if (i, j) in hole_set:
                continue
            cells.append([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)])
    # Drop vertices no cell references so holes do not leave strays.
    cells = np.array(cells)
    used = np.unique(cells)
    remap = -np.ones(len(verts), dtype=np.int64)
    remap[used] = np.arange(len(used))
    return Mesh(
        dimension=2, vertices=verts[used], cells=remap[cells], name=name
    )


def merge_meshes(a: Mesh, b: Mesh, name: str = "merged") -> Mesh:
    """Disjoint union of two meshes of the same dimension."""
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    verts = np.vstack([a.vertices, b.vertices])
    cells = np.vstack([a.cells, b.cells + a.n_vertices])
    return Mesh(dimension=a.dimension, vertices=verts, cells=cells, name=name)


def degrade_vertices(mesh: Mesh, fraction: float, rng: np.random.Generator) -> Mesh:
    """Randomly displace a fraction of vertices to create bad corners."""
    verts = mesh.vertices.copy()
    n = max(1, int(fraction * len(verts)))
    picks = rng.choice(len(verts), size=n, replace=False)
    # Displacements up to 0.9 cells collapse corner frames without
    # tearing the connectivity.
    verts[picks] += rng.uniform(-0.9, 0.9, size=(n, 3))
    if mesh.dimension == 2:
        verts[picks, 2] = 0.0
    return Mesh(
        dimension=mesh.dimension, vertices=verts, cells=mesh.cells, name=mesh.name
    )


def random_convex_hex(rng: np.random.Generator) -> np.ndarray:
    """(8, 3) corners of a random parallelepiped (affine image of the cube)."""
    cube = np.array(
        [
            [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
            [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
        ],
        dtype=np.float64,
    )
    while True:
        m = rng.uniform(-1.0, 1.0, size=(3, 3))
        if abs(np.linalg.det(m)) > 0.05:
            break
    shift = rng.uniform(-2.0, 2.0, size=3)
    return cube @ m.T + shift


def unit_cube_surface(uv: bool = False) -> ReferenceSurface:
    """Closed unit-cube triangle surface with outward orientation."""
    verts = np.array(
        [
            [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
            [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
        ],
        dtype=np.float64,
    )
    quads = [
        (0, 3, 2, 1),  # z = 0, outward -z
        (4, 5, 6, 7),  # z = 1, outward +z
        (0, 1, 5, 4),  # y = 0
        (1, 2, 6, 5),  # x = 1
        (2, 3, 7, 6),  # y = 1
        (3, 0, 4, 7),  # x = 0
    ]
    tris = []
    for a, b, c, d in quads:
        tris.append((a, b, c))
        tris.append((a, c, d))
    uv_arr = None
    if uv:
        uv_arr = verts[:, :2].copy()
    return ReferenceSurface(
        vertices=verts,
        triangles=np.array(tris, dtype=np.int64),
        uv=uv_arr,
        closed=True,
        name="unit-cube",
    )
