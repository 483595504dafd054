import pytest
from hypothesis import given, settings, strategies as st

from asmcurve import fnspace as fs
from asmcurve.errors import PrecisionBudgetExceeded, ZeroFunction
from asmcurve.gf import build_field
from asmcurve.poly import BiPoly
from asmcurve.series import LaurentSeries, expand_at, ord_of_function, ord_of_hyperplane

from conftest import curve

F9 = build_field(3, 2)


def series(draw_coeffs, val, prec):
    return LaurentSeries(F9, val, draw_coeffs, prec)


coeff_lists = st.lists(st.integers(0, 8), min_size=1, max_size=12)


@settings(max_examples=100, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists, st.integers(-3, 3))
def test_ring_laws(a, b, c, v):
    A, B, C = series(a, v, 12), series(b, 0, 12), series(c, 1, 12)
    assert (A * B).same_as(B * A)
    assert ((A * B) * C).same_as(A * (B * C))
    assert (A * (B + C)).same_as(A * B + A * C)
    assert (A - A).is_zero_to_prec()


@settings(max_examples=100, deadline=None)
@given(coeff_lists, st.integers(-4, 4))
def test_inverse(a, v):
    A = series(a, v, 14)
    if A.is_zero_to_prec():
        return
    one = A * A.inverse()
    assert one.val == 0 and one.coeff(0) == 1
    assert all(one.coeff(k) == 0 for k in range(1, one.prec))


def test_geometric_series():
    # 1 / (1 - t) = 1 + t + t^2 + ...
    S = LaurentSeries.poly(F9, [1, 2], 8).inverse()
    assert S.coeffs.tolist() == [1] * 8


def test_frobenius_of_series():
    S = LaurentSeries.poly(F9, [3, 1], 9, val=1)  # i t + t^2
    T = S.frob(1)
    assert T.val == 3 and T.coeff(3) == F9.frob(3) and T.coeff(6) == 1


@pytest.mark.parametrize("name", ["asm_p3", "mixed_p3", "asm_p2e2", "lin_p2_x4x2x", "asm_p5"])
def test_chart_residual_vanishes(name):
    cv = fs.affine_sample_curve(curve(name))
    for P in cv.places()[:40] + cv.omega1 + cv.omega2:
        ch = expand_at(cv, P, 20)
        assert ch.residual(cv).is_zero_to_prec()


@pytest.mark.parametrize("name", ["asm_p3", "mixed_p3", "asm_p2e2", "asm_p5"])
def test_orders_at_infinity(name):
    cv = curve(name)
    ctx, q = cv.ctx, cv.q
    x, y = BiPoly.x(ctx), BiPoly.y(ctx)
    for P in cv.omega1:
        (beta,) = P.coords
        assert ord_of_function(cv, x, P) == -1
        assert ord_of_function(cv, y - BiPoly.const(ctx, beta), P) == q
    for Q in cv.omega2:
        (alpha,) = Q.coords
        assert ord_of_function(cv, y, Q) == -1
        assert ord_of_function(cv, x - BiPoly.const(ctx, alpha), Q) == q


def test_affine_orders():
    cv = fs.affine_sample_curve(curve("asm_p3"))
    ctx = cv.ctx
    for P in cv.affine_places()[:6]:
        a, b = P.coords
        xa = BiPoly.x(ctx) - BiPoly.const(ctx, a)
        yb = BiPoly.y(ctx) - BiPoly.const(ctx, b)
        # smooth point: one of x - a, y - b is a local parameter
        assert min(ord_of_function(cv, xa, P), ord_of_function(cv, yb, P)) == 1


def test_degree_of_z_hyperplane():
    # Z = 0 meets phi(X) exactly in the 2q places of D, each simply
    cv = curve("asm_p2e2")
    assert [ord_of_hyperplane(cv, [0, 0, 1, 0], P) for P in cv.omega1 + cv.omega2] == [1] * 8


def test_errors():
    cv = curve("asm_p3")
    with pytest.raises(ZeroFunction):
        ord_of_function(cv, cv.defining_poly, cv.omega1[0])
    with pytest.raises(ValueError):
        expand_at(cv, cv.omega1[0], 0)
    # y - 1 vanishes to order q = 3 at P_1, out of reach at precision 2 without doublings
    yb = BiPoly.y(cv.ctx) - BiPoly.const(cv.ctx, 1)
    with pytest.raises(PrecisionBudgetExceeded):
        ord_of_function(cv, yb, cv.omega1[1], prec=2, max_doublings=0)
