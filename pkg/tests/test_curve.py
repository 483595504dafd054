import itertools

import numpy as np
import pytest

from asmcurve import curve_from_dict
from asmcurve.curve import (affine_points_over, homogeneous_eval, multiplicity_at, projective_points,
                            rational_points, singular_locus, tangent_lines)
from asmcurve.errors import NonPrime, NotMonic, QTooSmall, SpecParseError, ZeroConstant, ZeroLinearTerm
from asmcurve.gf import build_field

from conftest import CONFIGS, curve


@pytest.mark.parametrize("bad,err", [
    (dict(p=4, e=1, L1=[1, 1], L2=[1, 1], c=1), NonPrime),
    (dict(p=2, e=1, L1=[1, 1], L2=[1, 1], c=1), QTooSmall),
    (dict(p=3, e=1, L1=[2, 2], L2=[2, 1], c=1), NotMonic),
    (dict(p=3, e=1, L1=[0, 1], L2=[2, 1], c=1), ZeroLinearTerm),
    (dict(p=3, e=1, L1=[2, 1], L2=[2, 1], c=0), ZeroConstant),
    (dict(p=3, e=1, L1=[2, 1, 1], L2=[2, 1], c=1), SpecParseError),
    ({"p": 3}, SpecParseError),
])
def test_spec_validation(bad, err):
    with pytest.raises(err):
        curve_from_dict(bad)


# name -> (work field degree, q, genus)
BOOK = {
    "asm_p3": (1, 3, 4),
    "mixed_p3": (2, 3, 4),
    "asm_p2e2": (2, 4, 9),
    "lin_p2_x4x2x": (3, 4, 9),
    "mixed_p2e2": (6, 4, 9),
    "asm_p5": (1, 5, 16),
}


@pytest.mark.parametrize("name", sorted(BOOK))
def test_bookkeeping(name):
    cv = curve(name)
    m, q, g = BOOK[name]
    assert (cv.ctx.m, cv.q, cv.genus) == (m, q, g)
    assert len(cv.omega1) == len(cv.omega2) == q
    assert cv.deg_D == 2 * q


def _brute_affine(cv, ctx):
    # direct evaluation of L1(x) L2(y) + c with python loops
    vals = {}
    for a in range(ctx.size):
        for L in (cv.L1, cv.L2):
            vals[(id(L), a)] = L.eval_enc(ctx, a)
    c = int(cv.over(ctx).c)
    return sorted((a, b) for a, b in itertools.product(range(ctx.size), repeat=2)
                  if ctx.add(ctx.mul(vals[(id(cv.L1), a)], vals[(id(cv.L2), b)]), c) == 0)


def test_affine_points_by_hand():
    # x^3 - x vanishes on F3, so L1 L2 + 1 = 1 has no affine zeros
    assert len(curve("asm_p3").affine_points) == 0
    F9 = build_field(3, 2)
    pts = affine_points_over(curve("asm_p3"), F9)
    # L(x) = x^3 - x maps F9 onto the trace-zero line {0, i, 2i}, each value 3 times;
    # u v = -1 with u, v in {i, 2i}: i * i = -1 and 2i * 2i = -1, so 2 * 9 = 18 points
    assert len(pts) == 18
    assert sorted(map(tuple, pts.tolist())) == _brute_affine(curve("asm_p3"), F9)


@pytest.mark.parametrize("name", ["asm_p3", "asm_p2e2", "lin_p2_x4x2x"])
def test_rational_points_lie_on_curve(name):
    cv = curve(name)
    F = build_field(cv.p, 2 * cv.ctx.m)
    pts = rational_points(cv, F)
    assert all(homogeneous_eval(cv, P, F) == 0 for P in pts)
    assert len(pts) == len(affine_points_over(cv, F)) + 2
    assert len(projective_points(F, 2)) == F.size**2 + F.size + 1


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_singular_points(name):
    cv = curve(name)
    assert singular_locus(cv) == [(1, 0, 0), (0, 1, 0)]
    assert multiplicity_at(cv, "P") == multiplicity_at(cv, "Q") == cv.q
    # the q tangents at P' = (1:0:0) are y = beta z
    assert len(tangent_lines(cv, "P")) == cv.q


def test_places_are_consistent():
    cv = curve("asm_p2e2").over(build_field(2, 4))
    places = cv.places()
    assert len(places) == len(cv.affine_points) + 2 * cv.q
    assert all(cv.is_place(P) for P in places)
    assert np.all(np.isin(cv.betas, range(cv.ctx.size)))
