"""High-order cubature on attractors of affine iterated function systems."""

from .errors import NumericalError, ValidationError
from .ifs import (
    IFS,
    AffineMap,
    BoundingBox,
    bounding_box,
    chaos_sample,
    compose_word,
    estimate_diameter,
    fixed_point,
    spectral_norm,
)
from .measure import MeasureSpec, hausdorff_dimension, hausdorff_weights
from .polyspace import (
    Polynomial,
    SpaceSpec,
    compose_affine,
    ruelle_apply,
    ruelle_block,
    spectral_radius_bound,
)
from .moments import MomentTable, compute_moments, integrate_polynomial
from .interpolation import TensorGrid, chebyshev_nodes, lagrange_eval_all, lebesgue_estimate
from .weights import CubatureRule, assemble_S, build_rule, solve_weights, verify_exactness
from .cubature import Integrand, Mesh, apply_rule, build_mesh, h_integrate, mesh_boxes

__version__ = "0.1.0"

__all__ = [
    "IFS",
    "AffineMap",
    "BoundingBox",
    "CubatureRule",
    "Integrand",
    "MeasureSpec",
    "Mesh",
    "MomentTable",
    "NumericalError",
    "Polynomial",
    "SpaceSpec",
    "TensorGrid",
    "ValidationError",
    "apply_rule",
    "assemble_S",
    "bounding_box",
    "build_mesh",
    "build_rule",
    "chaos_sample",
    "chebyshev_nodes",
    "compose_affine",
    "compose_word",
    "compute_moments",
    "estimate_diameter",
    "fixed_point",
    "h_integrate",
    "hausdorff_dimension",
    "hausdorff_weights",
    "integrate_polynomial",
    "lagrange_eval_all",
    "lebesgue_estimate",
    "mesh_boxes",
    "ruelle_apply",
    "ruelle_block",
    "solve_weights",
    "spectral_norm",
    "spectral_radius_bound",
    "verify_exactness",
]
