"""Linear algebra on spaces of functions x^i y^j.

``space_dimension`` computes dim L(rD) inside a box of standard monomials by
imposing, at every place of D, that the principal part below t^-r vanishes.
On top of it sit the canonical-basis and |D|-completeness checks, canonical
order sequences (hence Weierstrass gaps) and the "q is a pole number" test.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _config, kernels
from .curve import Curve, Place, affine_points_over
from .errors import PrecisionBudgetExceeded, VerificationFailed
from .gf import build_field
from .poly import BiPoly
from .series import ord_of_function


@dataclass
class FunctionSpaceBasis:
    divisor: str
    basis: list
    dim: int
    checks: dict = field(default_factory=dict)


@dataclass
class OrderSequenceReport:
    """``orders`` are ord_P(f) over the canonical space; ``canonical_orders`` add the twist of (q-2)D at P."""

    place: Place
    orders: list
    canonical_orders: list
    gaps: list
    nongaps: list


def rank(ctx, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    _, piv = kernels.row_reduce(M, ctx.add_t, ctx.mul_t, ctx.inv_t, ctx.neg_t)
    return len(piv)


def nullspace(ctx, M) -> list:
    """Basis of {v : M v = 0} as integer arrays."""
    M = np.asarray(M, dtype=np.int64)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        R, piv = np.zeros((0, ncols), dtype=np.int64), []
    else:
        R, piv = kernels.row_reduce(M, ctx.add_t, ctx.mul_t, ctx.inv_t, ctx.neg_t)
    piv = [int(c) for c in piv]
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(piv):
            v[c] = ctx.neg(int(R[r, f]))
        out.append(v)
    return out


def standard_box(q: int, bound: int) -> list:
    """Exponents (i, j) <= bound not divisible by x^q y^q (independent functions on X)."""
    return [(i, j) for i in range(bound + 1) for j in range(bound + 1) if i < q or j < q]


def _pole_conditions(cv: Curve, monos, r: int, bound: int):
    """Rows: coefficient of t^n, n < -r, of each monomial at each place at infinity."""
    prec = bound + 2
    rows = []
    for P in cv.omega1 + cv.omega2:
        ch = cv.chart(P, prec)
        block = np.zeros((bound - r, len(monos)), dtype=np.int64)
        for k, (i, j) in enumerate(monos):
            block[:, k] = ch.monomial(i, j).window(-bound, -r)
        rows.append(block)
    return np.concatenate(rows)


def space_dimension(cv: Curve, r: int, bound: int | None = None):
    """dim of L(rD) intersected with the span of ``standard_box(q, bound)``.

    Returns ``(dim, monomials, kernel_vectors)``.  Polynomials in x, y are
    regular at every affine place, so only the 2q places at infinity impose
    conditions.  With bound >= q - 1 the box already contains L(rD) for
    r <= q - 2, so this is the full dimension.
    """
    bound = 2 * cv.q if bound is None else bound
    monos = standard_box(cv.q, bound)
    C = _pole_conditions(cv, monos, r, bound)
    ker = nullspace(cv.ctx, C)
    return len(ker), monos, ker


def min_order_at_infinity(cv: Curve, i: int, j: int) -> int:
    """min over the places of D of ord(x^i y^j)."""
    prec = 2 * cv.q + i + j + 2
    best = None
    for P in cv.omega1 + cv.omega2:
        s = cv.chart(P, prec).monomial(i, j)
        o = s.val  # a lower bound when zero to precision, which never decides membership
        best = o if best is None else min(best, o)
    return best


def verify_canonical_basis(cv: Curve) -> FunctionSpaceBasis:
    q, g = cv.q, cv.genus
    ctx = cv.ctx
    box = [(i, j) for i in range(q - 1) for j in range(q - 1)]
    checks = {}

    bad = [(i, j) for i, j in box if min_order_at_infinity(cv, i, j) < -(q - 2)]
    checks["membership"] = not bad
    if bad:
        raise VerificationFailed("monomials outside L((q-2)D)", {"monomials": bad})

    rep = order_sequence(cv, cv.omega1[0])
    checks["independent"] = len(rep.orders) == len(box)
    if not checks["independent"]:
        raise VerificationFailed("canonical monomials are dependent", {"orders": rep.orders})

    dim, monos, ker = space_dimension(cv, q - 2)
    box_idx = {m: k for k, m in enumerate(monos)}
    inside = all(all(v[box_idx[m]] == 0 for m in monos if not (m[0] <= q - 2 and m[1] <= q - 2)) for v in ker)
    checks["dim"] = dim
    checks["kernel_is_box"] = inside and dim == len(box)
    if dim != g or not inside:
        raise VerificationFailed("dim L((q-2)D) != g", {"dim": dim, "genus": g})

    checks["canonical_degree"] = (q - 2) * cv.deg_D == 2 * g - 2 == 2 * q * (q - 2)
    if not checks["canonical_degree"]:
        raise VerificationFailed("degree of (q-2)D is not 2g-2")

    # x^q y^q = sum_{(i,j) != (q,q)} a_ij x^i y^j, read off from L1(x) L2(y) + c = 0
    F = cv.defining_poly
    rhs = {k: ctx.neg(v) for k, v in F.terms.items() if k != (q, q)}
    shape_ok = F.terms.get((q, q)) == 1 and all(i <= q and j <= q for i, j in rhs)
    lhs_minus_rhs = BiPoly.monomial(ctx, q, q) - BiPoly(ctx, rhs)
    pts_ok = all(lhs_minus_rhs.evaluate(int(a), int(b)) == 0 for a, b in cv.affine_points)
    chart = cv.chart(cv.omega1[0], 4 * q)
    series_ok = chart.evaluate(lhs_minus_rhs).is_zero_to_prec()
    checks["reduction_identity"] = shape_ok and pts_ok and series_ok
    if not checks["reduction_identity"]:
        raise VerificationFailed("reduction identity for x^q y^q fails")

    basis = [BiPoly.monomial(ctx, i, j) for i, j in box]
    return FunctionSpaceBasis("(q-2)D", basis, dim, checks)


def verify_L_of_D(cv: Curve) -> FunctionSpaceBasis:
    q = cv.q
    ctx = cv.ctx
    base = [(0, 0), (1, 0), (0, 1), (1, 1)]
    checks = {}
    orders = {m: min_order_at_infinity(cv, *m) for m in base}
    checks["membership"] = all(o >= -1 for o in orders.values())
    if not checks["membership"]:
        raise VerificationFailed("1, x, y, xy not all in L(D)", {"orders": orders})

    # independence: the evaluation pattern at one place of each kind
    P, Q = cv.omega1[0], cv.omega2[0]
    rows = []
    for place in (P, Q):
        ch = cv.chart(place, 4 * q)
        rows.append(np.array([ch.monomial(*m).window(-1, 2 * q) for m in base]).T)
    checks["independent"] = rank(ctx, np.concatenate(rows)) == 4
    if not checks["independent"]:
        raise VerificationFailed("1, x, y, xy are dependent")

    excluded = {}
    for i in range(q + 1):
        for j in range(q + 1):
            if (i, j) in base:
                continue
            excluded[(i, j)] = min_order_at_infinity(cv, i, j)
    failures = [m for m, o in excluded.items() if o >= -1]
    checks["excluded_monomials"] = len(excluded)
    if failures:
        raise VerificationFailed("monomial outside {1,x,y,xy} lies in L(D)", {"monomials": failures})

    dim, monos, ker = space_dimension(cv, 1)
    checks["dim"] = dim
    if dim != 4:
        raise VerificationFailed("dim L(D) != 4", {"dim": dim})
    basis = [BiPoly.monomial(ctx, i, j) for i, j in base]
    return FunctionSpaceBasis("D", basis, dim, checks)


def order_sequence(cv: Curve, P: Place, prec: int | None = None,
                   max_doublings: int | None = None) -> OrderSequenceReport:
    """Vanishing orders at P of the canonical system |(q-2)D| and the resulting gaps."""
    max_doublings = _config.MAX_PRECISION_DOUBLINGS if max_doublings is None else max_doublings
    q, g = cv.q, cv.genus
    ctx = cv.ctx
    twist = q - 2 if P.at_infinity else 0
    box = [(i, j) for i in range(q - 1) for j in range(q - 1)]
    prec = prec or cv.default_precision()
    for _ in range(max_doublings + 1):
        ch = cv.chart(P, prec + q)
        M = np.array([ch.monomial(i, j).window(-twist, prec - twist) for i, j in box])
        _, piv = kernels.row_reduce(M, ctx.add_t, ctx.mul_t, ctx.inv_t, ctx.neg_t)
        if len(piv) == g:
            break
        prec *= 2
    else:
        raise PrecisionBudgetExceeded(f"order sequence at {P.label()} incomplete")
    canon = [int(c) for c in piv]
    gaps = [o + 1 for o in canon]
    gapset = set(gaps)
    nongaps = [n for n in range(1, 2 * g + 1) if n not in gapset]
    return OrderSequenceReport(P, [o - twist for o in canon], canon, gaps, nongaps)


def q_in_semigroup(cv: Curve, P: Place):
    """Whether q is a pole number at P, with the certifying data.

    At a place of D the witness is 1/(y - beta) (resp. 1/(x - alpha)); its
    orders are computed at every enumerated place.  Elsewhere the verdict
    comes from the canonical order sequence.
    """
    ctx = cv.ctx
    q = cv.q
    if P.at_infinity:
        (r,) = P.coords
        if P.kind == "omega1":
            den = BiPoly.y(ctx) - BiPoly.const(ctx, r)
            name = f"1/(y-{r})"
        else:
            den = BiPoly.x(ctx) - BiPoly.const(ctx, r)
            name = f"1/(x-{r})"
        orders = {}
        for Q in cv.places():
            if Q.kind == "affine" and den.evaluate(*Q.coords):
                orders[Q.label()] = 0
            else:
                orders[Q.label()] = -ord_of_function(cv, den, Q)
        pole = -orders[P.label()]
        others_ok = all(o >= 0 for lab, o in orders.items() if lab != P.label())
        ok = pole == q and others_ok
        return ok, {"witness": name, "pole_order": pole, "regular_elsewhere": others_ok, "orders": orders}
    rep = order_sequence(cv, P)
    return q in rep.nongaps, {"gaps": rep.gaps, "canonical_orders": rep.canonical_orders}


def affine_sample_curve(cv: Curve, max_bits: int | None = None) -> Curve:
    """cv itself if it has rational affine points, else the first extension that does."""
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    m = cv.ctx.m
    while True:
        ctx = build_field(cv.p, m, max_bits=max_bits)
        if len(affine_points_over(cv, ctx)):
            return cv.over(ctx)
        m += cv.ctx.m


def sample_affine_places(cv: Curve) -> list:
    places = cv.affine_places()
    if len(places) <= _config.AFFINE_SAMPLE_FULL:
        return places
    return places[: _config.AFFINE_SAMPLE_SIZE]


def weierstrass_check(cv: Curve, max_bits: int | None = None) -> dict:
    """Compare {P : q in H(P)} with the places of D over a field with affine points."""
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    cvs = affine_sample_curve(cv, max_bits)
    q = cv.q
    verdicts = {}
    for P in cvs.omega1 + cvs.omega2:
        ok, data = q_in_semigroup(cvs, P)
        rep = order_sequence(cvs, P)
        verdicts[P.label()] = {"q_in_H": ok, "staircase_agrees": (q in rep.nongaps) == ok, "witness": data["witness"]}
    non_hyperelliptic = True
    for P in sample_affine_places(cvs):
        rep = order_sequence(cvs, P)
        non_hyperelliptic &= rep.canonical_orders[:2] == [0, 1]
        verdicts[P.label()] = {"q_in_H": q in rep.nongaps, "q_minus_1_order": (q - 1) in rep.orders}
    selected = {lab for lab, v in verdicts.items() if v["q_in_H"]}
    expected = {P.label() for P in cvs.omega1 + cvs.omega2}
    return {
        "field": cvs.ctx.descriptor(),
        "places_tested": len(verdicts),
        "affine_tested": len(verdicts) - len(expected),
        "matches": selected == expected and all(v.get("staircase_agrees", True) for v in verdicts.values()),
        "non_hyperelliptic": non_hyperelliptic,
        "verdicts": verdicts,
    }
