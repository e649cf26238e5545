"""Mesh loading and connectivity.

Supported inputs: VTK legacy ASCII unstructured grids (hex cells, type 12,
or quad cells, type 9), MEDIT ``.mesh`` files (``Hexahedra`` /
``Quadrilaterals`` blocks, 1-based indices), and Wavefront OBJ for
reference surfaces (``v``/``vt``/``f``, triangles and quads).

Internal hex corner order is the VTK hexahedron convention: corners 0-3
form the bottom quad, corners 4-7 the top quad, corner 4 above corner 0.
MEDIT hexahedra use the same ordering, so the permutation applied on load
is the identity; it is kept as an explicit table so a different source
convention is a one-line change.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

HEX_ARITY = 8
QUAD_ARITY = 4

# Faces of a VTK-ordered hexahedron (quad corner loops).
HEX_FACES = (
    (0, 3, 2, 1),
    (4, 5, 6, 7),
    (0, 1, 5, 4),
    (1, 2, 6, 5),
    (2, 3, 7, 6),
    (3, 0, 4, 7),
)

# 12 unique edges of a VTK-ordered hexahedron.
HEX_EDGES = (
    (0, 1), (1, 2), (2, 3), (3, 0),
    (4, 5), (5, 6), (6, 7), (7, 4),
    (0, 4), (1, 5), (2, 6), (3, 7),
)

QUAD_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))

# MEDIT hexahedron corner index -> VTK corner index.
MEDIT_TO_VTK_HEX = (0, 1, 2, 3, 4, 5, 6, 7)


class MeshFormatError(ValueError):
    """Malformed or unsupported mesh file content."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Mesh:
    """Immutable vertex/cell arrays for a hex (3D) or quad (2D) mesh.

    ``vertices`` is (n, 3) float64 (2D meshes carry z = 0); ``cells`` is
    (m, 8) for hexes or (m, 4) for quads, in VTK corner order.
    """

    dimension: int
    vertices: np.ndarray
    cells: np.ndarray
    name: str = ""

    def __post_init__(self):
        verts = _readonly(np.ascontiguousarray(self.vertices, dtype=np.float64))
        cells = _readonly(np.ascontiguousarray(self.cells, dtype=np.int64))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "cells", cells)
        if self.dimension not in (2, 3):
            raise MeshFormatError(f"dimension must be 2 or 3, got {self.dimension}")
        arity = HEX_ARITY if self.dimension == 3 else QUAD_ARITY
        if cells.ndim != 2 or (len(cells) and cells.shape[1] != arity):
            raise MeshFormatError(
                f"cells must have arity {arity} for dimension {self.dimension}"
            )
        if cells.size == 0:
            object.__setattr__(self, "cells", _readonly(cells.reshape(0, arity)))
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise MeshFormatError("vertices must be (n, 3)")
        if len(cells):
            if cells.min() < 0 or cells.max() >= len(verts):
                raise MeshFormatError("cell index out of range")
            sorted_cells = np.sort(cells, axis=1)
            if np.any(sorted_cells[:, :-1] == sorted_cells[:, 1:]):
                raise MeshFormatError("cell repeats a vertex index")

    @property
    def arity(self) -> int:
        return HEX_ARITY if self.dimension == 3 else QUAD_ARITY

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_cells(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class Adjacency:
    """Derived incidence tables for a Mesh.

    Edges/faces are deduplicated by sorted vertex tuple and listed in
    lexicographic key order, so construction is deterministic. ``faces``
    stores each face in the corner order of the first cell that produced
    it, for use as the boundary surface.
    """

    vertex_cells: tuple  # vertex id -> tuple of incident cell ids
    edges: np.ndarray  # (E, 2) sorted vertex pairs
    edge_cells: tuple  # edge index -> tuple of incident cell ids
    faces: np.ndarray  # (F, 4) corner loops; empty for 2D
    face_cells: tuple  # face index -> tuple of incident cell ids
    average_edge_length: float
    bbox_min: np.ndarray
    bbox_max: np.ndarray
    diagonal: float

    def __post_init__(self):
        for attr in ("edges", "faces", "bbox_min", "bbox_max"):
            object.__setattr__(self, attr, _readonly(np.asarray(getattr(self, attr))))

    def boundary_face_indices(self) -> np.ndarray:
        return np.array(
            [i for i, cs in enumerate(self.face_cells) if len(cs) == 1], dtype=np.int64
        )

    def edge_index(self) -> dict:
        """Map from sorted vertex pair to edge id."""
        return {(int(u), int(v)): i for i, (u, v) in enumerate(self.edges)}


@dataclass(frozen=True)
class ReferenceSurface:
    """Triangle surface used as the boundary-error reference.

    Quads are fan-triangulated on load. ``uv`` is (n, 2) or None; when
    present it has one entry per surface vertex.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    uv: np.ndarray | None = None
    closed: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", _readonly(np.ascontiguousarray(self.vertices, dtype=np.float64))
        )
        object.__setattr__(
            self, "triangles", _readonly(np.ascontiguousarray(self.triangles, dtype=np.int64))
        )
        if self.uv is not None:
            uv = _readonly(np.ascontiguousarray(self.uv, dtype=np.float64))
            if len(uv) != len(self.vertices):
                raise MeshFormatError("uv must have one entry per surface vertex")
            object.__setattr__(self, "uv", uv)

    @property
    def diagonal(self) -> float:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(np.linalg.norm(hi - lo))


# ---------------------------------------------------------------------------
# loading


def load_mesh(path: str, format: str = "auto") -> Mesh:
    """Load a hex or quad mesh from a VTK legacy ASCII or MEDIT file."""
    if format == "auto":
        format = _sniff_format(path)
    name = os.path.splitext(os.path.basename(path))[0]
    with open(path, "r") as fh:
        text = fh.read()
    if format == "vtk-legacy-ascii":
        return _parse_vtk(text, name)
    if format == "medit-mesh":
        return _parse_medit(text, name)
    raise MeshFormatError(f"unknown mesh format {format!r}")


def _sniff_format(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    if ext == ".vtk":
        return "vtk-legacy-ascii"
    if ext == ".mesh":
        return "medit-mesh"
    with open(path, "r") as fh:
        head = fh.read(4096)
    if "# vtk DataFile" in head or "DATASET" in head:
        return "vtk-legacy-ascii"
    return "medit-mesh"


class _Tokens:
    """Whitespace token stream that remembers line numbers for errors."""

    def __init__(self, text: str):
        self.toks = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0] if line.lstrip().startswith("#") else line
            for tok in body.split():
                self.toks.append((tok, lineno))
        self.pos = 0
        self.lineno = 0

    def next(self) -> str:
        if self.pos >= len(self.toks):
            raise MeshFormatError(f"unexpected end of file after line {self.lineno}")
        tok, self.lineno = self.toks[self.pos]
        self.pos += 1
        return tok

    def next_int(self) -> int:
        tok = self.next()
        try:
            return int(tok)
        except ValueError:
            raise MeshFormatError(f"line {self.lineno}: expected integer, got {tok!r}")

    def next_float(self) -> float:
        tok = self.next()
        try:
            return float(tok)
        except ValueError:
            raise MeshFormatError(f"line {self.lineno}: expected number, got {tok!r}")

    def peek(self) -> str | None:
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None


def _parse_vtk(text: str, name: str) -> Mesh:
    lines = text.splitlines()
    # Skip the two header lines and the ASCII marker before tokenizing:
    # the title line may contain arbitrary words.
    body_start = 0
    for i, line in enumerate(lines):
        if line.strip().upper().startswith("ASCII"):
            body_start = i + 1
            break
        if line.strip().upper().startswith("BINARY"):
            raise MeshFormatError(f"line {i + 1}: binary VTK is not supported")
    toks = _Tokens("\n".join(lines[body_start:]))

    points = None
    conn = None
    types = None
    while toks.peek() is not None:
        key = toks.next().upper()
        if key == "DATASET":
            kind = toks.next().upper()
            if kind != "UNSTRUCTURED_GRID":
                raise MeshFormatError(
                    f"line {toks.lineno}: unsupported dataset {kind}"
                )
        elif key == "POINTS":
            n = toks.next_int()
            toks.next()  # dtype
            points = np.array(
                [toks.next_float() for _ in range(3 * n)], dtype=np.float64
            ).reshape(n, 3)
        elif key == "CELLS":
            n = toks.next_int()
            toks.next_int()  # total list size
            conn = []
            for _ in range(n):
                k = toks.next_int()
                conn.append([toks.next_int() for _ in range(k)])
        elif key == "CELL_TYPES":
            n = toks.next_int()
            types = [toks.next_int() for _ in range(n)]
        elif key in ("POINT_DATA", "CELL_DATA", "FIELD"):
            break  # attributes are ignored
        else:
            raise MeshFormatError(f"line {toks.lineno}: unexpected token {key!r}")

    if points is None or conn is None or types is None:
        raise MeshFormatError("missing POINTS, CELLS, or CELL_TYPES section")
    if len(conn) != len(types):
        raise MeshFormatError("CELLS and CELL_TYPES disagree on cell count")

    type_set = set(types)
    if type_set == {12}:
        dimension, arity = 3, HEX_ARITY
    elif type_set == {9}:
        dimension, arity = 2, QUAD_ARITY
    elif len(type_set) > 1:
        raise MeshFormatError("mixed-arity cells are not supported")
    elif not type_set:
        raise MeshFormatError("mesh has no cells")
    else:
        raise MeshFormatError(f"unsupported cell type {type_set.pop()}")

    for c in conn:
        if len(c) != arity:
            raise MeshFormatError("cell connectivity length does not match cell type")
    cells = np.array(conn, dtype=np.int64)
    return Mesh(dimension=dimension, vertices=points, cells=cells, name=name)


def _parse_medit(text: str, name: str) -> Mesh:
    toks = _Tokens(text)
    points = None
    hexes = None
    quads = None
    dim = 3
    while toks.peek() is not None:
        key = toks.next()
        low = key.lower()
        if low == "meshversionformatted":
            toks.next_int()
        elif low == "dimension":
            dim = toks.next_int()
        elif low == "vertices":
            n = toks.next_int()
            points = np.zeros((n, 3), dtype=np.float64)
            for i in range(n):
                for j in range(dim):
                    points[i, j] = toks.next_float()
                toks.next()  # reference tag
        elif low == "hexahedra":
            n = toks.next_int()
            hexes = np.zeros((n, 8), dtype=np.int64)
            for i in range(n):
                raw = [toks.next_int() - 1 for _ in range(8)]
                for j, src in enumerate(MEDIT_TO_VTK_HEX):
                    hexes[i, j] = raw[src]
                toks.next()  # reference tag
        elif low == "quadrilaterals":
            n = toks.next_int()
            quads = np.zeros((n, 4), dtype=np.int64)
            for i in range(n):
                for j in range(4):
                    quads[i, j] = toks.next_int() - 1
                toks.next()  # reference tag
        elif low == "end":
            break
        elif low in ("triangles", "tetrahedra", "edges"):
            raise MeshFormatError(
                f"line {toks.lineno}: unsupported cell type {key!r}"
            )
        else:
            raise MeshFormatError(f"line {toks.lineno}: unexpected keyword {key!r}")

    if points is None:
        raise MeshFormatError("missing Vertices block")
    if hexes is not None and quads is not None:
        raise MeshFormatError("mixed-arity cells are not supported")
    if hexes is not None:
        return Mesh(dimension=3, vertices=points, cells=hexes, name=name)
    if quads is not None:
        return Mesh(dimension=2, vertices=points, cells=quads, name=name)
    raise MeshFormatError("mesh has no Hexahedra or Quadrilaterals block")


def write_mesh(mesh: Mesh, path: str, format: str = "auto") -> None:
    """Debug writer; coordinates at 17 significant digits round-trip exactly."""
    if format == "auto":
        format = "vtk-legacy-ascii" if path.endswith(".vtk") else "medit-mesh"
    with open(path, "w") as fh:
        if format == "vtk-legacy-ascii":
            fh.write("# vtk DataFile Version 3.0\n")
            fh.write(f"{mesh.name or 'mesh'}\nASCII\nDATASET UNSTRUCTURED_GRID\n")
            fh.write(f"POINTS {mesh.n_vertices} double\n")
            for p in mesh.vertices:
                fh.write(f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g}\n")
            arity = mesh.arity
            fh.write(f"CELLS {mesh.n_cells} {mesh.n_cells * (arity + 1)}\n")
            for c in mesh.cells:
                fh.write(f"{arity} " + " ".join(str(int(v)) for v in c) + "\n")
            fh.write(f"CELL_TYPES {mesh.n_cells}\n")
            ctype = 12 if mesh.dimension == 3 else 9
            for _ in range(mesh.n_cells):
                fh.write(f"{ctype}\n")
        elif format == "medit-mesh":
            fh.write("MeshVersionFormatted 2\n")
            fh.write(f"Dimension\n{mesh.dimension}\n")
            fh.write(f"Vertices\n{mesh.n_vertices}\n")
            for p in mesh.vertices:
                coords = p[: mesh.dimension]
                fh.write(" ".join(f"{x:.17g}" for x in coords) + " 0\n")
            block = "Hexahedra" if mesh.dimension == 3 else "Quadrilaterals"
            fh.write(f"{block}\n{mesh.n_cells}\n")
            inv = np.argsort(MEDIT_TO_VTK_HEX) if mesh.dimension == 3 else range(4)
            for c in mesh.cells:
                fh.write(" ".join(str(int(c[j]) + 1) for j in inv) + " 0\n")
            fh.write("End\n")
        else:
            raise MeshFormatError(f"unknown mesh format {format!r}")


# ---------------------------------------------------------------------------
# adjacency


def _group_by_inverse(inverse: np.ndarray, owners: np.ndarray, n_groups: int) -> tuple:
    """owners partitioned by group id, each group in owner order."""
    order = np.lexsort((owners, inverse))
    inv_s = inverse[order]
    own_s = owners[order]
    bounds = np.searchsorted(inv_s, np.arange(n_groups + 1))
    return tuple(
        tuple(int(c) for c in own_s[bounds[i] : bounds[i + 1]]) for i in range(n_groups)
    )


def build_adjacency(mesh: Mesh) -> Adjacency:
    """Build incidence tables, average edge length, and bounding box.

    Edges and faces are deduplicated by sorted vertex tuple and listed in
    lexicographic key order, so construction is deterministic.
    """
    m = mesh.n_cells
    edge_table = np.array(HEX_EDGES if mesh.dimension == 3 else QUAD_EDGES)
    cell_ids_e = np.repeat(np.arange(m, dtype=np.int64), len(edge_table))

    if m:
        edge_keys = np.sort(mesh.cells[:, edge_table], axis=2).reshape(-1, 2)
        edges, edge_inv = np.unique(edge_keys, axis=0, return_inverse=True)
        edge_cells = _group_by_inverse(edge_inv.ravel(), cell_ids_e, len(edges))
    else:
        edges = np.zeros((0, 2), dtype=np.int64)
        edge_cells = ()

    if mesh.dimension == 3 and m:
        face_loops = mesh.cells[:, np.array(HEX_FACES)].reshape(-1, 4)
        face_keys = np.sort(face_loops, axis=1)
        _, first, face_inv = np.unique(
            face_keys, axis=0, return_index=True, return_inverse=True
        )
        # Keep the corner loop of the first cell that produced each face.
        faces = face_loops[first]
        cell_ids_f = np.repeat(np.arange(m, dtype=np.int64), len(HEX_FACES))
        face_cells = _group_by_inverse(face_inv.ravel(), cell_ids_f, len(faces))
    else:
        faces = np.zeros((0, 4), dtype=np.int64)
        face_cells = ()

    if m:
        owners = np.repeat(np.arange(m, dtype=np.int64), mesh.arity)
        verts = mesh.cells.ravel()
        order = np.lexsort((owners, verts))
        verts_s = verts[order]
        own_s = owners[order]
        bounds = np.searchsorted(verts_s, np.arange(mesh.n_vertices + 1))
        vertex_cells = tuple(
            tuple(int(c) for c in own_s[bounds[i] : bounds[i + 1]])
            for i in range(mesh.n_vertices)
        )
    else:
        vertex_cells = tuple(() for _ in range(mesh.n_vertices))
    if len(edges):
        vecs = mesh.vertices[edges[:, 1]] - mesh.vertices[edges[:, 0]]
        avg_edge = float(np.linalg.norm(vecs, axis=1).mean())
    else:
        avg_edge = 0.0
    if mesh.n_vertices:
        lo = mesh.vertices.min(axis=0)
        hi = mesh.vertices.max(axis=0)
    else:
        lo = np.zeros(3)
        hi = np.zeros(3)
    return Adjacency(
        vertex_cells=vertex_cells,
        edges=edges,
        edge_cells=edge_cells,
        faces=faces,
        face_cells=face_cells,
        average_edge_length=avg_edge,
        bbox_min=lo,
        bbox_max=hi,
        diagonal=float(np.linalg.norm(hi - lo)),
    )


# ---------------------------------------------------------------------------
# reference surfaces


def load_reference_surface(path: str, format: str = "auto") -> ReferenceSurface:
    """Load an OBJ or VTK triangle/quad surface; quads are fan-triangulated."""
    if format == "auto":
        format = "obj" if path.lower().endswith(".obj") else "vtk-legacy-ascii"
    name = os.path.splitext(os.path.basename(path))[0]
    if format == "obj":
        return _parse_obj(path, name)
    if format == "vtk-legacy-ascii":
        with open(path) as fh:
            mesh_text = fh.read()
        return _surface_from_vtk(mesh_text, name)
    raise MeshFormatError(f"unknown surface format {format!r}")


def _parse_obj(path: str, name: str) -> ReferenceSurface:
    verts: list = []
    uvs: list = []
    faces: list = []  # list of [(vi, ti|None), ...]
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split("#", 1)[0].split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "vt":
                uvs.append([float(x) for x in parts[1:3]])
            elif parts[0] == "f":
                corners = []
                for spec in parts[1:]:
                    fields = spec.split("/")
                    vi = int(fields[0])
                    ti = None
                    if len(fields) > 1 and fields[1]:
                        ti = int(fields[1])
                    corners.append((vi, ti))
                if len(corners) not in (3, 4):
                    raise MeshFormatError(
                        f"line {lineno}: only triangle/quad faces are supported"
                    )
                faces.append((lineno, corners))

    n = len(verts)
    tris: list = []
    vert_uv: dict = {}
    for lineno, corners in faces:
        resolved = []
        for vi, ti in corners:
            idx = vi - 1 if vi > 0 else n + vi
            if idx < 0 or idx >= n:
                raise MeshFormatError(f"line {lineno}: dangling facet index {vi}")
            if ti is not None:
                t = ti - 1 if ti > 0 else len(uvs) + ti
                if t < 0 or t >= len(uvs):
                    raise MeshFormatError(f"line {lineno}: dangling texture index {ti}")
                vert_uv.setdefault(idx, uvs[t])
            resolved.append(idx)
        for k in range(1, len(resolved) - 1):
            tris.append((resolved[0], resolved[k], resolved[k + 1]))

    tri_arr = np.array(tris, dtype=np.int64).reshape(len(tris), 3)
    referenced = set(int(v) for v in tri_arr.ravel())
    uv_arr = None
    if referenced and all(v in vert_uv for v in referenced):
        uv_arr = np.zeros((n, 2), dtype=np.float64)
        for v, t in vert_uv.items():
            uv_arr[v] = t
    return ReferenceSurface(
        vertices=np.array(verts, dtype=np.float64).reshape(n, 3),
        triangles=tri_arr,
        uv=uv_arr,
        closed=_is_closed(tri_arr),
        name=name,
    )


def _surface_from_vtk(text: str, name: str) -> ReferenceSurface:
    lines = text.splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if line.strip().upper().startswith("ASCII"):
            body_start = i + 1
            break
    toks = _Tokens("\n".join(lines[body_start:]))
    points = None
    conn = None
    types = None
    while toks.peek() is not None:
        key = toks.next().upper()
        if key == "DATASET":
            toks.next()
        elif key == "POINTS":
            npts = toks.next_int()
            toks.next()
            points = np.array(
                [toks.next_float() for _ in range(3 * npts)], dtype=np.float64
            ).reshape(npts, 3)
        elif key == "CELLS":
            ncells = toks.next_int()
            toks.next_int()
            conn = []
            for _ in range(ncells):
                k = toks.next_int()
                conn.append([toks.next_int() for _ in range(k)])
        elif key == "CELL_TYPES":
            ncells = toks.next_int()
            types = [toks.next_int() for _ in range(ncells)]
        else:
            break
    if points is None or conn is None or types is None:
        raise MeshFormatError("missing POINTS, CELLS, or CELL_TYPES section")
    tris = []
    for c, t in zip(conn, types):
        if t == 5:
            tris.append(tuple(c))
        elif t == 9:
            tris.append((c[0], c[1], c[2]))
            tris.append((c[0], c[2], c[3]))
        else:
            raise MeshFormatError(f"unsupported surface cell type {t}")
    tri_arr = np.array(tris, dtype=np.int64).reshape(len(tris), 3)
    if len(tri_arr) and tri_arr.max() >= len(points):
        raise MeshFormatError("dangling facet index")
    return ReferenceSurface(
        vertices=points, triangles=tri_arr, uv=None, closed=_is_closed(tri_arr), name=name
    )


def _is_closed(triangles: np.ndarray) -> bool:
    """True iff every undirected triangle edge has exactly 2 incident faces."""
    if len(triangles) == 0:
        return False
    counts: dict = {}
    for a, b, c in triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (int(min(u, v)), int(max(u, v)))
            counts[key] = counts.get(key, 0) + 1
    return all(n == 2 for n in counts.values())
