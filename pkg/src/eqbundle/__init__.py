"""Exact decision procedures for connections adapted to G-connections on trivialized principal bundles."""

from .calculus import (
    Chart,
    InvariantField,
    LieValuedOneForm,
    LieValuedTwoForm,
    VectorField,
    contract,
    differential,
    exterior_derivative,
    invariant_bracket,
    pullback_oneform,
    vertical_sign,
    vf_bracket,
)
from .connections import (
    Connection,
    GAction,
    GConnection,
    PhiZero,
    contraction_criterion,
    curvature,
    g_curvature,
    is_adapted,
    is_strongly_adapted,
    phi_tilde,
    pi_tensor,
    solve_phi0,
    theorem1_check,
    tilde_eta,
)
from .lie import LieAlgebra, LieValuedFunction, check_jacobi, lie_bracket
from .linalg import LinearSystem, solve_linear
from .poly import Poly
from .scalars import Scalar

__version__ = "0.1.0"

__all__ = [
    "Chart", "InvariantField", "LieValuedOneForm", "LieValuedTwoForm", "VectorField",
    "contract", "differential", "exterior_derivative", "invariant_bracket",
    "pullback_oneform", "vertical_sign", "vf_bracket",
    "Connection", "GAction", "GConnection", "PhiZero", "contraction_criterion",
    "curvature", "g_curvature", "is_adapted", "is_strongly_adapted", "phi_tilde",
    "pi_tensor", "solve_phi0", "theorem1_check", "tilde_eta",
    "LieAlgebra", "LieValuedFunction", "check_jacobi", "lie_bracket",
    "LinearSystem", "solve_linear", "Poly", "Scalar",
]
