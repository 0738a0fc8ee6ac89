"""Euclidean-degree-efficient Chebyshev interpolation on the square and cube.

Collocation lattices (tensor, Padua, hexagonal, BCC, FCC, composite
octagonal), fast forward/inverse/adjoint transforms, spectral
differentiation and Clenshaw-Curtis style quadrature, plus a
rotation-averaged convergence benchmark harness.
"""

from .calculus import (
    Interpolant,
    QuadratureStencil,
    basis_integrals,
    differentiate,
    evaluate,
    gauss_legendre,
    integrate,
    interpolate,
    quadrature_stencil,
)
from .dct import BoundaryType, Grid1D, dct_1d, dct_nd, dct_typeV, idct_1d, idct_nd, nodes_1d
from .lattice import (
    BasisEntry,
    CartesianSublattice,
    ChebyshevLattice,
    Family,
    LatticeError,
    ReciprocalBasis,
    aliasing_class,
    basis_indices,
    boundary_efficiency,
    brillouin_union,
    build,
    decompose,
    degree_config,
    efficiency,
    lattice_descriptor,
    reciprocal_basis,
)
from .transform import (
    TransformPlan,
    adjoint,
    dense_oracle,
    forward,
    forward_padua,
    inverse,
    plan,
)

__all__ = [
    "BasisEntry",
    "BoundaryType",
    "CartesianSublattice",
    "ChebyshevLattice",
    "Family",
    "Grid1D",
    "Interpolant",
    "LatticeError",
    "QuadratureStencil",
    "ReciprocalBasis",
    "TransformPlan",
    "adjoint",
    "aliasing_class",
    "basis_indices",
    "basis_integrals",
    "boundary_efficiency",
    "brillouin_union",
    "build",
    "dct_1d",
    "dct_nd",
    "dct_typeV",
    "decompose",
    "degree_config",
    "dense_oracle",
    "differentiate",
    "efficiency",
    "evaluate",
    "forward",
    "forward_padua",
    "gauss_legendre",
    "idct_1d",
    "idct_nd",
    "integrate",
    "interpolate",
    "inverse",
    "lattice_descriptor",
    "nodes_1d",
    "plan",
    "quadrature_stencil",
    "reciprocal_basis",
]

__version__ = "0.1.0"
