"""Oscillating curves on ideal triangulations, their intersection pairing and
the symplectic basis of the gluing equations they produce.

Typical use::

    from oscbasis import load_triangulation, build_track, build_basis, assemble, solve
    T = load_triangulation("figure8.tri")
    basis = build_basis(build_track(T))
    sol = solve(assemble(basis))
"""

from importlib.resources import files

from .curves import (Basis, BasisCurve, CornerPass, CurveError, CurveWalk, Dive,
                     DualCurveContext, NormalizationError, boundary_basis, build_basis,
                     build_dual_context, edge_curve, normalize_basis, realize_walk,
                     route_dual_curve)
from .matrices import (ExactSolution, GramIdentityError, SymplecticSystem, assemble, solve,
                       verify_solution)
from .symplectic import (HolonomyVector, NotOscillating, holonomy, local_pairing, omega,
                         pairing, pairing_facewise)
from .traintrack import (TrainTrack, WeightVector, build_track, compatibility_system,
                         is_oscillating, kernel_basis)
from .triangulation import (IdealTriangulation, TriangulationError, abc_labelling,
                            boundary_triangulation, edge_classes, format_triangulation,
                            load_triangulation, parse_triangulation, random_triangulation)


def example_path(name: str):
    """Path of a bundled ``.tri`` file, e.g. ``example_path("figure8")``."""
    return files(__package__) / "data" / f"{name}.tri"


__all__ = [
    "Basis", "BasisCurve", "CornerPass", "CurveError", "CurveWalk", "Dive", "DualCurveContext",
    "ExactSolution", "GramIdentityError", "HolonomyVector", "IdealTriangulation",
    "NormalizationError", "NotOscillating", "SymplecticSystem", "TrainTrack",
    "TriangulationError", "WeightVector", "abc_labelling", "assemble", "boundary_basis",
    "boundary_triangulation", "build_basis", "build_dual_context", "build_track",
    "compatibility_system", "edge_classes", "edge_curve", "example_path", "format_triangulation",
    "holonomy", "is_oscillating", "kernel_basis", "load_triangulation", "local_pairing",
    "normalize_basis", "omega", "pairing", "pairing_facewise", "parse_triangulation", "random_triangulation",
    "realize_walk", "route_dual_curve", "solve", "verify_solution",
]
