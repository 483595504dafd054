"""Exact computations on generalized Artin-Schreier-Mumford curves L1(x) L2(y) + c = 0."""

__version__ = "0.1.0"

from .curve import Curve, CurveSpec, Place, curve_from_dict, load_curve  # noqa: E402
from .gf import FieldCtx, FieldElement, build_field  # noqa: E402
from .linpoly import LinearizedPoly  # noqa: E402

__all__ = [
    "Curve",
    "CurveSpec",
    "FieldCtx",
    "FieldElement",
    "LinearizedPoly",
    "Place",
    "build_field",
    "curve_from_dict",
    "load_curve",
]
