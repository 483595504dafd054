import pytest

from asmcurve import galois as gl
from asmcurve.gf import build_field

from conftest import curve, group


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_line_count(p, m):
    F = build_field(p, m)
    n = F.size
    want = (n**2 + 1) * (n**2 + n + 1)  # Grassmannian G(2, 4) over F_n
    assert gl.line_count(F) == want
    keys = {gl.line_key(F, H1, H2) for H1, H2 in gl.enumerate_lines(F)}
    assert len(keys) == want


# name -> Galois points (first nonzero coordinate 1)
POINTS = {
    "asm_p3": {(1, 1, 0), (1, 2, 0)},
    "asm_p5": {(1, 1, 0), (1, 2, 0), (1, 3, 0), (1, 4, 0)},
    "asm_p2e2": {(1, 1, 0), (1, 2, 0), (1, 3, 0)},
    "lin_p2_x4x2x": {(1, 1, 0)},
    "mixed_p3": set(),
}


@pytest.mark.parametrize("name", sorted(POINTS))
def test_galois_points(name):
    cv, G = curve(name), group(name)
    reports = gl.galois_points(cv, G)
    gal = {r.point for r in reports if r.is_galois}
    assert gal == POINTS[name]
    s = gl.galois_point_summary(cv, reports)
    assert s["count"] == s["expected"] and s["all_in_family"] and s["all_on_z0"]
    assert all(o == 2 * cv.q for o in s["group_orders"])
    assert gl.fiber_transitivity_points(cv, reports)["ok"]


def test_mixed_p2e2_has_no_galois_points():
    cv = curve("mixed_p2e2")
    s = gl.galois_point_summary(cv, gl.galois_points(cv, group("mixed_p2e2")))
    assert s["count"] == 0 and s["candidates"] > 4000


def test_decomposition_group_of_galois_point():
    G = group("asm_p3")
    F = G.ctx
    H = gl.decomposition_group_point(G, (1, 1, 0), F)
    assert len(H) == 6
    # it fixes the point and every line through it
    assert all(M.apply((1, 1, 0)) == (1, 1, 0) for M in H)


def test_line_families_by_hand():
    cv = curve("lin_p2_x4x2x")
    F = gl.enum_field(cv)
    fam = gl.line_families(cv, F)
    # k = 1: (s:t) over F2 gives 3 lines in family A; B1, B2 run over F8
    assert {t: len(v) for t, v in fam.items()} == {"A": 3, "B1": 8, "B2": 8, "General": 9, "General2": 9}
    assert gl.expected_line_tags(cv) == ("A", "B1", "B2")
    assert gl.expected_line_tags(curve("mixed_p3")) == ("General", "General2")
    assert gl.expected_line_tags(curve("asm_p3")) is None


@pytest.mark.parametrize("name,count", [("mixed_p3", 20), ("lin_p2_x4x2x", 19)])
def test_galois_lines(name, count):
    cv, G = curve(name), group(name)
    F = gl.enum_field(cv)
    reports = gl.galois_lines(cv, G, F)
    s = gl.galois_line_summary(cv, reports, F)
    assert s["matches"] and s["galois"] == count and s["untagged_galois"] == 0
    assert gl.fiber_transitivity_lines(cv, reports)["ok"]
    for r in reports:
        if r.is_galois:
            assert r.group_order == r.deg_projection == 2 * cv.q - r.base_degree


def test_chord_is_not_galois():
    cv, G = curve("lin_p2_x4x2x"), group("lin_p2_x4x2x")
    F = gl.enum_field(cv)
    H1, H2 = gl.chord_line(cv)
    r = next(r for r in gl.galois_lines(cv, G, F) if r.H1 == H1 and r.H2 == H2)
    assert r.base_degree == 2 and r.deg_projection == 2 * cv.q - 2
    assert not r.is_galois and r.group_order < r.deg_projection


@pytest.mark.parametrize("name", ["asm_p3", "mixed_p3", "asm_p2e2", "lin_p2_x4x2x"])
def test_line_infrastructure(name):
    c = gl.line_infrastructure_checks(curve(name))
    assert c["z0_count"] == 2 * curve(name).q and c["z0_orders"] == [1] and c["injective"]
