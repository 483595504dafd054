import pytest
from hypothesis import given, settings, strategies as st

from asmcurve import autgroup as ag
from asmcurve import galois as gl
from asmcurve.errors import LiftFailed, SearchBudgetExceeded
from asmcurve.gf import build_field

from conftest import curve, group

# name -> |closure|, |Sigma|, complement type
ORDERS = {
    "asm_p3": (36, 9, "dihedral of order 4"),
    "mixed_p3": (18, 9, "cyclic of order 2"),
    "asm_p2e2": (96, 16, "dihedral of order 6"),
    "lin_p2_x4x2x": (32, 16, "dihedral of order 2"),
    "mixed_p2e2": (16, 16, "cyclic of order 1"),
    "asm_p5": (200, 25, "dihedral of order 8"),
}


@pytest.mark.parametrize("name", sorted(ORDERS))
def test_closure_order_and_structure(name):
    cv, G = curve(name), group(name)
    order, sig, kind = ORDERS[name]
    assert G.order == order == ag.expected_order(cv)
    rep = ag.verify_structure(G, cv)
    assert rep["sigma_order"] == sig
    assert rep["h_type"] == kind


def test_structure_p3e2():
    cv, G = curve("asm_p3e2"), group("asm_p3e2")
    assert G.order == 2 * 81 * 8
    assert ag.verify_structure(G, cv)["sigma_order"] == 81


@pytest.mark.parametrize("name", ["asm_p3", "mixed_p3", "asm_p2e2", "lin_p2_x4x2x"])
def test_every_element_preserves_curve(name):
    cv, G = curve(name), group(name)
    cvg = cv.over(G.ctx)
    assert all(ag.preserves_curve(cvg, M) for M in G)


def test_non_automorphisms_rejected():
    cv = curve("asm_p3")
    F = build_field(3, 1)
    assert not ag.preserves_curve(cv, ag.ProjMap(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
    assert not ag.preserves_curve(cv, ag.ProjMap(F, [[0, 0, 1], [0, 1, 0], [1, 0, 0]]))
    # tau only for L1 = L2
    mixed = curve("mixed_p3")
    assert not ag.preserves_curve(mixed.over(group("mixed_p3").ctx), ag.tau(group("mixed_p3").ctx))


MAPS = [M for M in group("asm_p2e2")]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(MAPS), st.sampled_from(MAPS))
def test_projmap_algebra(A, B):
    assert (A @ A.inverse()).is_identity()
    assert (A @ B).inverse() == B.inverse() @ A.inverse()
    assert A.order() in (1, 2, 3, 4, 6, 8, 12)
    assert (A @ B) in group("asm_p2e2")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(MAPS), st.sampled_from(MAPS))
def test_lift_is_homomorphism(A, B):
    cv = curve("asm_p2e2").over(A.ctx)
    NA, NB = ag.lift_to_P3(A, cv), ag.lift_to_P3(B, cv)
    assert NA @ NB == ag.lift_to_P3(A @ B, cv)


def test_lift_rejects_non_affine_and_mixing_maps():
    cv = curve("asm_p3")
    F = cv.ctx
    with pytest.raises(LiftFailed):
        ag.lift_to_P3(ag.ProjMap(F, [[1, 0, 0], [0, 1, 0], [1, 0, 1]]), cv)
    with pytest.raises(LiftFailed):
        ag.lift_to_P3(ag.ProjMap(F, [[1, 0, 0], [1, 1, 0], [0, 0, 1]]), cv)


@pytest.mark.parametrize("name", ["asm_p3", "mixed_p3", "asm_p2e2", "lin_p2_x4x2x", "asm_p5"])
def test_action_on_places_at_infinity(name):
    a = ag.action_on_omega(group(name), curve(name))
    assert a["faithful"] and a["fixing_maps_keep_omega1"]
    q = curve(name).q
    # tau swaps the two sets of places when present, else Omega1 and Omega2 are separate orbits
    if curve(name).same_polys:
        assert a["orbits"] == [list(range(2 * q))]
    else:
        assert a["orbits"] == [list(range(q)), list(range(q, 2 * q))]


def test_exhaustive_matches_closure():
    E = ag.exhaustive_stabilizer(curve("asm_p3"), build_field(3, 2))
    assert E.order == 36 and ag.same_group(E, group("asm_p3"))
    assert E.structure["rational_points"] == 9 * 2 + 2


def test_exhaustive_budget():
    with pytest.raises(SearchBudgetExceeded):
        ag.exhaustive_stabilizer(curve("asm_p3"), build_field(3, 2), max_candidates=1000)


def test_mixed_p3_has_hidden_symmetry():
    # x^3 + x becomes a multiple of u^3 - u under x = i u, so this "mixed" curve is the
    # ASM curve in disguise over F9; its plane stabilizer is twice the generated group
    cv = curve("mixed_p3")
    G = group("mixed_p3")
    E = ag.exhaustive_stabilizer(cv, G.ctx)
    assert G.order == 18 and E.order == 36
    assert G.keys() < E.keys()
    extra = [M for M in E if M.key not in G.keys()]
    # every extra map swaps the two singular points, so a twisted swap exists even though L1 != L2
    assert len(extra) == 18
    assert all(M.apply((1, 0, 0)) == (0, 1, 0) and M.apply((0, 1, 0)) == (1, 0, 0) for M in extra)


def test_p2_k1_galois_groups_do_not_generate():
    # with p^k = 2 there is a single Galois point and its group (order 2q) is far from Aut
    cv, G = curve("lin_p2_x4x2x"), group("lin_p2_x4x2x")
    reports = gl.galois_points(cv, G)
    H = gl.generated_by_galois_groups(reports)
    assert sum(r.is_galois for r in reports) == 1
    assert (H.order, G.order) == (8, 32)
    assert not gl.galois_group_generation_check(cv, G, reports)


def test_lift_pairs_modes():
    G = group("asm_p3")
    assert len(ag.lift_pairs(G)) == 36 * 36
    small = ag.lift_pairs(G, max_pairs=10)
    assert len(small) == 36 * len(G.generators)
    assert ag.check_lift_homomorphism(G, curve("asm_p3"), max_pairs=10)
