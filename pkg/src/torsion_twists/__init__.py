"""Twists of elliptic curves by p-torsion cocycles (p = 2, 3).

Exact arithmetic over Q(z3) and Q(z3)(a, d), the function field of E_a, the
quartic and cubic twist models with their symbolic checks, and local
solvability at finite and infinite places.
"""

from .curve import EllipticCurve, Point, curve_from_parameter, point_add, scalar_mul
from .field import ZETA, Cyc, KummerElement, ParamFrac, Poly
from .localsolve import LocalPlace, LocalVerdict, Status, cubic_local, els_candidates, els_scan, quartic_local
from .twist import CubicModel, QuarticModel, build_zw, cubic_model, fit_relation, quadratic_model

__all__ = [
    "EllipticCurve", "Point", "curve_from_parameter", "point_add", "scalar_mul",
    "ZETA", "Cyc", "KummerElement", "ParamFrac", "Poly",
    "LocalPlace", "LocalVerdict", "Status", "cubic_local", "els_candidates", "els_scan", "quartic_local",
    "CubicModel", "QuarticModel", "build_zw", "cubic_model", "fit_relation", "quadratic_model",
]

__version__ = "0.1.0"
