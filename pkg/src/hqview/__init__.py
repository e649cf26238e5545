"""Mesh quality analysis toolkit for hexahedral and quadrilateral meshes."""

__version__ = "0.1.0"

from .boundary import (
    BoundaryCurve,
    BoundaryErrorRecord,
    CollatedSeries,
    SurfaceErrorField,
    collate,
    extract_boundary_2d,
    extract_boundary_3d,
    per_loop_series,
    signed_boundary_error_2d,
    signed_boundary_error_3d,
)
from .feature_edges import FeatureEdgeSet, default_e_qmax, filter_feature_edges
from .glyphs import (
    ClusterSummary,
    Glyph,
    GlyphParams,
    build_glyphs,
    cluster_glyphs,
    default_params,
    one_ring,
    sub_region,
)
from .mesh_io import (
    Adjacency,
    Mesh,
    MeshFormatError,
    ReferenceSurface,
    build_adjacency,
    load_mesh,
    load_reference_surface,
    write_mesh,
)
from .overlap import (
    OverlapReport,
    analyze_overlaps,
    detect_overlapping_cells,
    detect_overlapping_vertices,
    place_arrows,
    point_in_hex,
)
from .quality import (
    QualityField,
    QualityHistogram,
    compute_quality_field,
    corner_scaled_jacobian,
    quality_histogram,
)
