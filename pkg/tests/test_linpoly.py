import pytest
from hypothesis import given, settings, strategies as st

from asmcurve.errors import FieldTooSmall
from asmcurve.gf import build_field
from asmcurve.linpoly import (LinearizedPoly, count_roots, lin_eval, root_space, splitting_degree,
                              subfield_index_k)

F2, F3 = build_field(2, 1), build_field(3, 1)


def L(ctx, coeffs):
    return LinearizedPoly.from_encodings(ctx, coeffs)


# (p, coefficients of x, x^p, x^{p^2}, ...) -> degree of the splitting field over F_p
SPLIT = [
    (3, [2, 1], 1),      # x^3 - x
    (3, [1, 1], 2),      # x^3 + x, roots 0 and +-i
    (2, [1, 0, 1], 2),   # x^4 + x
    (2, [1, 1, 1], 3),   # x (x^3 + x + 1)
    (5, [4, 1], 1),      # x^5 - x
    (3, [2, 0, 1], 2),   # x^9 - x
]


@pytest.mark.parametrize("p,coeffs,deg", SPLIT)
def test_splitting_degree(p, coeffs, deg):
    assert splitting_degree(L(build_field(p, 1), coeffs)) == deg


def test_subfield_index():
    assert subfield_index_k(L(F3, [2, 1]), L(F3, [2, 1])) == 1
    assert subfield_index_k(L(F2, [1, 0, 1]), L(F2, [1, 0, 1])) == 2
    assert subfield_index_k(L(F2, [1, 1, 1]), L(F2, [1, 0, 1])) == 1
    assert subfield_index_k(L(F3, [2, 0, 1]), L(F3, [2, 0, 1])) == 2


def test_root_space_needs_splitting_field():
    P = L(F3, [1, 1])
    assert count_roots(P, F3) == 1
    with pytest.raises(FieldTooSmall):
        root_space(P, F3)
    assert [int(r) for r in root_space(P, build_field(3, 2))] == [0, 3, 6]


def test_eval_by_hand():
    F8 = build_field(2, 3)
    P = L(F2, [1, 1, 1])
    # x^4 + x^2 + x at the class of t, t^3 = t + 1: t^4 = t^2 + t so the sum is 0
    assert P.eval_enc(F8, 2) == 0
    assert P.eval_enc(F8, 1) == 1


CASES = [(L(F2, [1, 1, 1]), build_field(2, 6)), (L(F3, [2, 0, 1]), build_field(3, 4)),
         (L(build_field(2, 2), [2, 3, 1]), build_field(2, 4))]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(CASES), st.data())
def test_additive(case, data):
    P, F = case
    a, b = (data.draw(st.integers(0, F.size - 1)) for _ in range(2))
    c = data.draw(st.integers(0, F.p - 1))
    assert P.eval_enc(F, F.add(a, b)) == F.add(P.eval_enc(F, a), P.eval_enc(F, b))
    assert P.eval_enc(F, F.mul(c, a)) == F.mul(c, P.eval_enc(F, a))
    assert int(lin_eval(P, F(a))) == P.eval_enc(F, a)


@pytest.mark.parametrize("p,coeffs,deg", SPLIT)
def test_roots_closed_under_addition(p, coeffs, deg):
    P = L(build_field(p, 1), coeffs)
    F = build_field(p, deg)
    roots = {int(r) for r in root_space(P, F)}
    assert len(roots) == P.q
    assert all(F.add(a, b) in roots for a in roots for b in roots)
