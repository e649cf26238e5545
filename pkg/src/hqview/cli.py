"""Command-line front end.

    hqview analyze  --mesh m.vtk --out scene.json [--rmax auto ...]
    hqview boundary --original opt.mesh --reference orig.mesh --out scene.json
    hqview compare  --mesh-a a.vtk --mesh-b b.vtk --out cmp.json

Exit codes: 0 ok, 1 I/O or parse failure, 2 invalid arguments,
3 analysis impossible (e.g. empty mesh). HQVIEW_THREADS caps internal
parallelism.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import __version__
from .boundary import (
    collate,
    extract_boundary_2d,
    extract_boundary_3d,
    per_loop_series,
    signed_boundary_error_2d,
    signed_boundary_error_3d,
)
from .feature_edges import default_e_qmax, filter_feature_edges
from .glyphs import EmptyMeshError, GlyphParams, build_glyphs, cluster_glyphs, default_params
from .mesh_io import MeshFormatError, build_adjacency, load_mesh, load_reference_surface
from .overlap import DEFAULT_EPSILON_REL, analyze_overlaps
from .quality import compute_quality_field, quality_histogram
from .scene import (
    boundary_section_2d,
    boundary_section_3d,
    build_compare,
    build_scene,
    write_scene,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_ARGS = 2
EXIT_ANALYSIS = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _auto_or_float(value: str):
    if value == "auto":
        return "auto"
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hqview", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p):
        p.add_argument("--rmax", type=_auto_or_float, default="auto")
        p.add_argument("--rdmin", type=_auto_or_float, default="auto")
        p.add_argument("--eqmax", type=_auto_or_float, default="auto")
        p.add_argument("--epsilon-overlap", type=float, default=DEFAULT_EPSILON_REL)
        p.add_argument("--bins", type=int, default=20)
        p.add_argument(
            "--format",
            choices=["auto", "vtk-legacy-ascii", "medit-mesh"],
            default="auto",
        )
        p.add_argument("--out", "-o", required=True)

    pa = sub.add_parser("analyze", help="full quality/glyph/overlap analysis of one mesh")
    pa.add_argument("--mesh", "-m", required=True)
    pa.add_argument("--quality-csv", help="also dump per-vertex J_m as CSV")
    add_params(pa)

    pb = sub.add_parser("boundary", help="boundary error of a mesh against a reference")
    pb.add_argument("--original", required=True)
    pb.add_argument("--reference", required=True)
    pb.add_argument("--uv-from-reference", action="store_true")
    pb.add_argument("--boundary-csv", help="also dump (vertex, loop, arclength, error) CSV")
    add_params(pb)

    pc = sub.add_parser("compare", help="analyze two meshes with identical parameters")
    pc.add_argument("--mesh-a", required=True)
    pc.add_argument("--mesh-b", required=True)
    pc.add_argument("--label-a", default="before")
    pc.add_argument("--label-b", default="after")
    add_params(pc)
    return parser


def _load(path: str, format: str):
    try:
        mesh = load_mesh(path, format)
    except FileNotFoundError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO)
    except MeshFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO)
    if mesh.n_cells == 0:
        raise CliError(f"{path}: mesh has no cells", EXIT_ANALYSIS)
    return mesh


def _resolve_params(args, adjacency, field) -> tuple[GlyphParams, float]:
    try:
        if args.rmax == "auto" or args.rdmin == "auto":
            auto = default_params(adjacency)
            r_max = auto.r_max if args.rmax == "auto" else args.rmax
            r_dmin = auto.r_dmin if args.rdmin == "auto" else args.rdmin
            if args.rmax != "auto" and args.rdmin == "auto":
                r_dmin = 0.1 * r_max
        else:
            r_max, r_dmin = args.rmax, args.rdmin
        params = GlyphParams(r_max=r_max, r_dmin=r_dmin)
    except EmptyMeshError as exc:
        raise CliError(str(exc), EXIT_ANALYSIS)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_ARGS)
    e_qmax = default_e_qmax(field) if args.eqmax == "auto" else args.eqmax
    return params, e_qmax


def _analyze_one(path: str, args) -> tuple[dict, dict]:
    mesh = _load(path, args.format)
    adjacency = build_adjacency(mesh)
    field = compute_quality_field(mesh, adjacency)
    if args.bins < 1:
        raise CliError("--bins must be >= 1", EXIT_ARGS)
    histogram = quality_histogram(field, args.bins)
    params, e_qmax = _resolve_params(args, adjacency, field)
    glyphs = build_glyphs(field, mesh, params)
    clusters = cluster_glyphs(glyphs)
    features = filter_feature_edges(mesh, adjacency, field, e_qmax)
    overlaps = analyze_overlaps(mesh, adjacency, args.epsilon_overlap)
    provenance = {
        "inputs": [path],
        "parameters": {
            "r_max": params.r_max,
            "r_dmin": params.r_dmin,
            "e_qmax": e_qmax,
            "epsilon_overlap": args.epsilon_overlap,
            "bins": args.bins,
        },
    }
    scene = build_scene(
        mesh, adjacency, field, histogram, params, glyphs, clusters,
        features, overlaps, boundary=None, provenance=provenance,
    )
    summary = {
        "vertices": mesh.n_vertices,
        "cells": mesh.n_cells,
        "worst_quality": scene["quality"]["worst"],
        "clusters": len(clusters),
        "overlapping_pairs": len(overlaps.vertex_pairs),
        "containments": len(overlaps.containments),
    }
    return scene, summary


def cmd_analyze(args) -> int:
    scene, summary = _analyze_one(args.mesh, args)
    write_scene(scene, args.out)
    if args.quality_csv:
        with open(args.quality_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["vertex", "J_m"])
            for v, q in enumerate(scene["quality"]["vertex_quality"]):
                writer.writerow([v, repr(q)])
    print(
        f"{args.mesh}: {summary['vertices']} vertices, {summary['cells']} cells, "
        f"worst J_m {summary['worst_quality']:.6g}, {summary['clusters']} clusters, "
        f"{summary['overlapping_pairs']} overlapping pairs, "
        f"{summary['containments']} containments"
    )
    return EXIT_OK


def cmd_boundary(args) -> int:
    original = _load(args.original, args.format)
    if original.dimension == 2:
        reference = _load(args.reference, args.format)
        if reference.dimension != 2:
            raise CliError("dimension mismatch between original and reference", EXIT_ARGS)
        orig_adj = build_adjacency(original)
        ref_adj = build_adjacency(reference)
        loops = extract_boundary_2d(original, orig_adj)
        ref_loops = extract_boundary_2d(reference, ref_adj)
        if not loops or not ref_loops:
            raise CliError("empty boundary", EXIT_ANALYSIS)
        diag = float(ref_adj.diagonal)
        records = signed_boundary_error_2d(original, loops, reference, ref_loops, diag)
        series = per_loop_series(loops, records)
        section = boundary_section_2d(loops, records, series, collate(records), diag)
        scene = _scene_with_boundary(original, orig_adj, args, section, [args.original, args.reference])
        if args.boundary_csv:
            _write_boundary_csv(args.boundary_csv, series)
    else:
        try:
            reference = load_reference_surface(args.reference)
        except FileNotFoundError as exc:
            raise CliError(f"cannot read {args.reference}: {exc}", EXIT_IO)
        except MeshFormatError as exc:
            raise CliError(f"{args.reference}: {exc}", EXIT_IO)
        orig_adj = build_adjacency(original)
        surface = extract_boundary_3d(original, orig_adj)
        if len(surface.quads) == 0 or len(reference.triangles) == 0:
            raise CliError("empty boundary", EXIT_ANALYSIS)
        if args.uv_from_reference and reference.uv is None:
            raise CliError("reference surface carries no UV coordinates", EXIT_ARGS)
        error_field = signed_boundary_error_3d(original, surface, reference)
        if not args.uv_from_reference:
            error_field = type(error_field)(
                surface=error_field.surface,
                records=error_field.records,
                signed=error_field.signed,
                uv=None,
            )
        diag = reference.diagonal
        section = boundary_section_3d(error_field, collate(list(error_field.records)), diag)
        scene = _scene_with_boundary(original, orig_adj, args, section, [args.original, args.reference])
        if not error_field.signed:
            print("reference surface is not closed: unsigned error magnitudes", file=sys.stderr)
    write_scene(scene, args.out)
    n = len(scene["boundary"]["records"])
    vals = scene["boundary"]["collated"]["values"]
    print(
        f"{args.original}: {n} boundary vertices, error range "
        f"[{min(vals):.6g}, {max(vals):.6g}]"
    )
    return EXIT_OK


def _scene_with_boundary(mesh, adjacency, args, section, inputs) -> dict:
    field = compute_quality_field(mesh, adjacency)
    histogram = quality_histogram(field, args.bins)
    params, e_qmax = _resolve_params(args, adjacency, field)
    glyphs = build_glyphs(field, mesh, params)
    clusters = cluster_glyphs(glyphs)
    features = filter_feature_edges(mesh, adjacency, field, e_qmax)
    overlaps = analyze_overlaps(mesh, adjacency, args.epsilon_overlap)
    provenance = {
        "inputs": inputs,
        "parameters": {
            "r_max": params.r_max,
            "r_dmin": params.r_dmin,
            "e_qmax": e_qmax,
            "epsilon_overlap": args.epsilon_overlap,
            "bins": args.bins,
        },
    }
    return build_scene(
        mesh, adjacency, field, histogram, params, glyphs, clusters,
        features, overlaps, boundary=section, provenance=provenance,
    )


def _write_boundary_csv(path: str, series) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vertex", "loop", "arclength", "b_error"])
        for loop_id, (verts, arc, errs) in enumerate(series):
            for v, a, e in zip(verts, arc, errs):
                writer.writerow([int(v), loop_id, repr(float(a)), repr(float(e))])


def cmd_compare(args) -> int:
    scenes = []
    summaries = []
    shared_params = None
    for path in (args.mesh_a, args.mesh_b):
        scene, summary = _analyze_one(path, args)
        if shared_params is None:
            # Resolve auto parameters once on mesh A, then reuse verbatim
            # so both meshes are analyzed under identical settings.
            shared_params = scene["provenance"]["parameters"]
            args.rmax = shared_params["r_max"]
            args.rdmin = shared_params["r_dmin"]
            args.eqmax = shared_params["e_qmax"]
        scenes.append(scene)
        summaries.append(summary)
    doc = build_compare(scenes[0], scenes[1], args.label_a, args.label_b)
    write_scene(doc, args.out)
    print(f"{'label':<10} {'worst J_m':>12} {'clusters':>9} {'feature edges':>14}")
    for label, scene, summary in zip((args.label_a, args.label_b), scenes, summaries):
        n_feat = len(scene["feature_edges"]["emphasized"])
        print(
            f"{label:<10} {summary['worst_quality']:>12.6g} "
            f"{summary['clusters']:>9} {n_feat:>14}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ARGS if exc.code not in (0, None) else 0
    handlers = {"analyze": cmd_analyze, "boundary": cmd_boundary, "compare": cmd_compare}
    try:
        return handlers[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
