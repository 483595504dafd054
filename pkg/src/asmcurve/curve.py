"""Generalized Artin-Schreier-Mumford curves  L1(x) * L2(y) + c = 0.

A :class:`Curve` fixes a working field large enough to hold the coefficients
and every root of L1 and L2, so the 2q places at infinity (the poles of x,
indexed by roots of L2, and the poles of y, indexed by roots of L1) all have
coordinates there.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import _config
from .errors import (
    QTooSmall,
    SpecParseError,
    VerificationFailed,
    ZeroConstant,
)
from .gf import FieldCtx, FieldElement, build_field, embedding_map
from .linpoly import LinearizedPoly, root_space, splitting_degree
from .poly import BiPoly


@dataclass(frozen=True)
class CurveSpec:
    p: int
    e: int
    L1: LinearizedPoly
    L2: LinearizedPoly
    c: FieldElement
    base_ctx: FieldCtx

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "L1": list(self.L1.encodings),
            "L2": list(self.L2.encodings),
            "c": self.c.value,
            "base_degree": self.base_ctx.m,
        }


@dataclass(frozen=True)
class Place:
    """A place of the smooth model.

    ``kind`` is ``"omega1"`` (pole of x, coords ``(beta,)`` with L2(beta)=0),
    ``"omega2"`` (pole of y, coords ``(alpha,)`` with L1(alpha)=0) or
    ``"affine"`` (coords ``(a, b)``).  Coordinates are encodings in the
    owning curve's working field.
    """

    kind: str
    coords: tuple

    @property
    def at_infinity(self) -> bool:
        return self.kind != "affine"

    def label(self) -> str:
        return f"{self.kind}:{','.join(str(c) for c in self.coords)}"


def spec_from_dict(d: dict, max_bits: int | None = None) -> CurveSpec:
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    try:
        p, e = int(d["p"]), int(d["e"])
        l1, l2 = [int(a) for a in d["L1"]], [int(a) for a in d["L2"]]
        c = int(d["c"])
        base_degree = int(d.get("base_degree", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecParseError(f"malformed curve spec: {exc}") from exc
    base = build_field(p, base_degree, max_bits=max_bits)
    if e < 1 or p**e <= 2:
        raise QTooSmall(f"q = p^e = {p}^{e} must exceed 2")
    if len(l1) != e + 1 or len(l2) != e + 1:
        raise SpecParseError(f"L1 and L2 need e+1 = {e + 1} coefficients")
    for a in l1 + l2 + [c]:
        if not 0 <= a < base.size:
            raise SpecParseError(f"encoding {a} out of range for {base}")
    if c == 0:
        raise ZeroConstant("c must be nonzero")
    return CurveSpec(p, e, LinearizedPoly.from_encodings(base, l1), LinearizedPoly.from_encodings(base, l2), base(c), base)


def load_spec(path, max_bits: int | None = None) -> CurveSpec:
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecParseError(f"cannot read curve spec {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecParseError("curve spec must be a JSON object")
    return spec_from_dict(data, max_bits=max_bits)


class Curve:
    """Validated curve with its working field, places at infinity and genus."""

    def __init__(self, spec: CurveSpec, ctx: FieldCtx):
        self.spec = spec
        self.ctx = ctx
        self.p = spec.p
        self.e = spec.e
        self.q = spec.p**spec.e
        self.genus = (self.q - 1) ** 2
        self.L1 = spec.L1.over(ctx)
        self.L2 = spec.L2.over(ctx)
        self.c = int(embedding_map(spec.base_ctx, ctx)[spec.c.value])
        self.alphas = [a.value for a in root_space(self.L1, ctx)]
        self.betas = [b.value for b in root_space(self.L2, ctx)]
        self.omega1 = [Place("omega1", (b,)) for b in self.betas]
        self.omega2 = [Place("omega2", (a,)) for a in self.alphas]
        self._charts = {}

    def __repr__(self):
        return f"Curve(L1={self.L1}, L2={self.L2}, c={self.c}, over {self.ctx})"

    @property
    def same_polys(self) -> bool:
        return self.spec.L1.encodings == self.spec.L2.encodings

    @property
    def plane_degree(self) -> int:
        return 2 * self.q

    @property
    def deg_D(self) -> int:
        return len(self.omega1) + len(self.omega2)

    def over(self, ctx: FieldCtx) -> "Curve":
        """The same curve with a larger working field."""
        if ctx is self.ctx:
            return self
        if ctx.p != self.p or ctx.m % self.ctx.m:
            raise ValueError(f"{ctx} does not contain {self.ctx}")
        return Curve(self.spec, ctx)

    def embed_enc(self, a: int, ctx: FieldCtx) -> int:
        return int(embedding_map(self.ctx, ctx)[a])

    # -- the defining polynomial ------------------------------------------

    @cached_property
    def defining_poly(self) -> BiPoly:
        ctx = self.ctx
        t = {}
        for i, a in enumerate(self.L1.coeffs):
            for j, b in enumerate(self.L2.coeffs):
                if a.value and b.value:
                    t[(self.p**i, self.p**j)] = ctx.mul(a.value, b.value)
        t[(0, 0)] = self.c
        return BiPoly(ctx, t)

    @cached_property
    def homogeneous_terms(self) -> dict:
        """Z^{2q} F(X/Z, Y/Z) as ``{(a, b, c): coeff}`` for X^a Y^b Z^c."""
        d = 2 * self.q
        return {(i, j, d - i - j): v for (i, j), v in self.defining_poly.terms.items()}

    def reduce(self, f: BiPoly) -> BiPoly:
        """Normal form of f modulo the defining polynomial (no monomial divisible by x^q y^q)."""
        q = self.q
        ctx = self.ctx
        lower = {k: ctx.neg(v) for k, v in self.defining_poly.terms.items() if k != (q, q)}
        t = dict(f.terms)
        while True:
            big = [k for k in t if k[0] >= q and k[1] >= q and t[k]]
            if not big:
                return BiPoly(ctx, t)
            i, j = max(big, key=lambda k: (k[0] + k[1], k))
            coef = t.pop((i, j))
            for (a, b), v in lower.items():
                key = (a + i - q, b + j - q)
                t[key] = ctx.add(t.get(key, 0), ctx.mul(coef, v))
            t = {k: v for k, v in t.items() if v}

    # -- evaluation ---------------------------------------------------------

    def lin_values(self, ctx: FieldCtx | None = None):
        ctx = ctx or self.ctx
        return self.L1.values(ctx), self.L2.values(ctx)

    @cached_property
    def affine_points(self) -> np.ndarray:
        """All (a, b) in the working field with L1(a) L2(b) + c = 0, in encoding order."""
        return affine_points_over(self, self.ctx)

    def affine_places(self) -> list:
        return [Place("affine", (int(a), int(b))) for a, b in self.affine_points]

    def places(self) -> list:
        return self.omega1 + self.omega2 + self.affine_places()

    def is_place(self, P: Place) -> bool:
        ctx = self.ctx
        if not all(0 <= int(v) < ctx.size for v in P.coords):
            return False
        if P.kind == "omega1":
            return len(P.coords) == 1 and self.L2.eval_enc(ctx, P.coords[0]) == 0
        if P.kind == "omega2":
            return len(P.coords) == 1 and self.L1.eval_enc(ctx, P.coords[0]) == 0
        if P.kind == "affine" and len(P.coords) == 2:
            a, b = P.coords
            return ctx.add(ctx.mul(self.L1.eval_enc(ctx, a), self.L2.eval_enc(ctx, b)), self.c) == 0
        return False

    def chart(self, P: Place, prec: int):
        from .series import expand_at

        key = (P, prec)
        if key not in self._charts:
            self._charts[key] = expand_at(self, P, prec)
        return self._charts[key]

    def default_precision(self) -> int:
        return 4 * self.genus + 4 * self.q


def affine_points_over(cv: Curve, ctx: FieldCtx) -> np.ndarray:
    v1, v2 = cv.lin_values(ctx)
    c = cv.embed_enc(cv.c, ctx)
    by_value = {}
    for b, val in enumerate(v2):
        by_value.setdefault(int(val), []).append(b)
    pts = []
    negc = ctx.neg(c)
    for a, la in enumerate(v1):
        if la == 0:
            continue
        target = ctx.div(negc, int(la))
        for b in by_value.get(target, []):
            pts.append((a, b))
    return np.array(pts, dtype=np.int64).reshape(-1, 2)


def validate_and_build(spec: CurveSpec, max_bits: int | None = None) -> Curve:
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    if spec.p**spec.e <= 2:
        raise QTooSmall(f"q = {spec.p}^{spec.e} must exceed 2")
    if spec.c.value == 0:
        raise ZeroConstant("c must be nonzero")
    for L in (spec.L1, spec.L2):
        if L.e != spec.e or L.ctx is not spec.base_ctx:
            raise SpecParseError("L1, L2 must have degree p^e over the base field")
    m = math.lcm(spec.base_ctx.m, splitting_degree(spec.L1, max_bits), splitting_degree(spec.L2, max_bits))
    return Curve(spec, build_field(spec.p, m, max_bits=max_bits))


def curve_from_dict(d: dict, max_bits: int | None = None) -> Curve:
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    return validate_and_build(spec_from_dict(d, max_bits), max_bits)


def load_curve(path, max_bits: int | None = None) -> Curve:
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    return validate_and_build(load_spec(path, max_bits), max_bits)


# -- plane model ---------------------------------------------------------------

def homogeneous_eval(cv: Curve, point, ctx: FieldCtx | None = None) -> int:
    """Z^{2q} (L1(X/Z) L2(Y/Z) + c) at a projective point (encodings in ``ctx``)."""
    ctx = ctx or cv.ctx
    emb = embedding_map(cv.ctx, ctx)
    X, Y, Z = (int(v) for v in point)
    if X == Y == Z == 0:
        raise ValueError("(0:0:0) is not a projective point")
    acc = 0
    for (a, b, c), v in cv.homogeneous_terms.items():
        term = ctx.mul(int(emb[v]), ctx.mul(ctx.pow(X, a), ctx.mul(ctx.pow(Y, b), ctx.pow(Z, c))))
        acc = ctx.add(acc, term)
    return acc


def homogeneous_eval_many(cv: Curve, pts, ctx: FieldCtx | None = None) -> np.ndarray:
    ctx = ctx or cv.ctx
    emb = embedding_map(cv.ctx, ctx)
    pts = np.asarray(pts, dtype=np.int64).reshape(-1, 3)
    acc = np.zeros(len(pts), dtype=np.int64)
    for (a, b, c), v in cv.homogeneous_terms.items():
        term = ctx.mul_t[ctx.pow_vec(pts[:, 0], a), ctx.mul_t[ctx.pow_vec(pts[:, 1], b), ctx.pow_vec(pts[:, 2], c)]]
        acc = ctx.add_t[acc, ctx.mul_t[int(emb[v]), term]]
    return np.asarray(acc, dtype=np.int64)


def projective_points(ctx: FieldCtx, dim: int = 2) -> np.ndarray:
    """All points of P^dim(ctx), normalised with first nonzero coordinate 1, in lexicographic encoding order."""
    N = ctx.size
    out = []
    for lead in range(dim + 1):
        tail = dim - lead
        grid = np.indices((N,) * tail).reshape(tail, -1).T if tail else np.zeros((1, 0), dtype=np.int64)
        block = np.zeros((len(grid), dim + 1), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = grid
        out.append(block)
    pts = np.concatenate(out)
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def rational_points(cv: Curve, ctx: FieldCtx | None = None) -> np.ndarray:
    """Projective points of the plane model over ``ctx`` (normalised)."""
    ctx = ctx or cv.ctx
    pts = projective_points(ctx, 2)
    return pts[homogeneous_eval_many(cv, pts, ctx) == 0]


def multiplicity_at(cv: Curve, which: str) -> int:
    """Multiplicity of the plane model at (1:0:0) (``which="P"``) or (0:1:0) (``"Q"``)."""
    axis = 0 if which == "P" else 1
    d = 2 * cv.q
    return min(d - k[axis] for k in cv.homogeneous_terms)


def tangent_cone(cv: Curve, which: str) -> dict:
    """Lowest-order part at (1:0:0) as ``{(b, c): coeff}`` in (Y, Z); at (0:1:0) in (X, Z)."""
    axis = 0 if which == "P" else 1
    mult = multiplicity_at(cv, which)
    d = 2 * cv.q
    return {
        (k[1 - axis], k[2]): v for k, v in cv.homogeneous_terms.items() if d - k[axis] == mult
    }


def tangent_lines(cv: Curve, which: str) -> list:
    """Roots r of the tangent cone: lines Y - rZ = 0 at (1:0:0), X - rZ = 0 at (0:1:0)."""
    ctx = cv.ctx
    cone = tangent_cone(cv, which)
    roots = []
    for r in range(ctx.size):
        acc = 0
        for (u, w), v in cone.items():
            acc = ctx.add(acc, ctx.mul(v, ctx.pow(r, u)))
        if acc == 0:
            roots.append(r)
    return roots


def singular_locus(cv: Curve) -> list:
    """The singular points of the plane model: always (1:0:0) and (0:1:0).

    Affine smoothness: dF/dx = a10 L2(y) and dF/dy = a20 L1(x) vanish together
    only where L1(x) L2(y) = 0, where F = c != 0.  Checked exhaustively over
    the working field's affine points as well.
    """
    ctx = cv.ctx
    a10, a20 = cv.L1.coeffs[0].value, cv.L2.coeffs[0].value
    if a10 == 0 or a20 == 0 or cv.c == 0:
        raise VerificationFailed("degenerate curve data")
    v1, v2 = cv.lin_values()
    for a, b in cv.affine_points:
        if ctx.mul(a10, int(v2[b])) == 0 and ctx.mul(a20, int(v1[a])) == 0:
            raise VerificationFailed("singular affine point", {"point": [int(a), int(b)]})
    for which in ("P", "Q"):
        if multiplicity_at(cv, which) < 2:
            raise VerificationFailed(f"point {which} is smooth")
    if sorted(tangent_lines(cv, "P")) != sorted(cv.betas) or sorted(tangent_lines(cv, "Q")) != sorted(cv.alphas):
        raise VerificationFailed("tangent cones do not match the root spaces")
    return [(1, 0, 0), (0, 1, 0)]
