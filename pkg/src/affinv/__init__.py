"""Affine invariant points of convex polygons, prescribed on a chosen orbit."""
from .construct import (
    InvariantPointDescriptor,
    build,
    build_proper,
    equivariance_report,
    evaluate,
    evaluate_detailed,
    properness_report,
)
from .ellipsoid import Ellipsoid, loewner_ellipsoid, normalizer
from .errors import *  # noqa: F401,F403
from .geometry import (
    AffineMap,
    ConvexBody,
    apply_affine,
    canonicalize,
    compose,
    hausdorff_distance,
    intersect_convex,
    invert,
    symmetric_difference_volume,
    volume,
)
from .orbit import AlignmentResult, BumpParams, SolverConfig, alignment_objective, bump, orbit_distance, retract
from .points import BaseInvariantPointId, centroid, check_inclusion, evaluate_base, loewner_center
from .sampling import RandomSpec, random_affine, random_body
from .svg import emit_svg
from .symmetry import AffineSubspace, SymmetryGroup, affine_symmetry_group, fixed_point_set

__version__ = "0.1.0"
