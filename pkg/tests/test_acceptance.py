"""Acceptance criteria 1-9, each exact.  One PASS/FAIL line per criterion is
printed in the terminal summary."""
import itertools
import time

import numpy as np
import pytest

from asmcurve import autgroup as ag
from asmcurve import fnspace as fs
from asmcurve import galois as gl
from asmcurve.gf import build_field, embedding_map
from asmcurve.linpoly import root_space
from asmcurve.poly import BiPoly
from asmcurve.series import ord_of_function

from conftest import ACCEPTANCE, curve, group

GENUS_CONFIGS = ["asm_p3", "asm_p2e2", "asm_p5", "asm_p3e2"]


def record(n, ok, label):
    ACCEPTANCE[n] = (bool(ok), label)
    assert ok, label


def test_criterion_1_genus():
    rows = []
    for name in GENUS_CONFIGS:
        cv = curve(name)
        t0 = time.perf_counter()
        dim, _, _ = fs.space_dimension(cv, cv.q - 2)
        dt = time.perf_counter() - t0
        limit = 1.0 if cv.q <= 5 else 120.0
        rows.append((name, dim, (cv.q - 1) ** 2, dt < limit))
    ok = all(d == g and fast for _, d, g, fast in rows)
    record(1, ok, "dim L((q-2)D) = (q-1)^2: " + ", ".join(f"{n}={d}/{g}" for n, d, g, _ in rows))


def test_criterion_2_canonical_basis():
    dims = {}
    for name in GENUS_CONFIGS:
        cv = curve(name)
        b = fs.verify_canonical_basis(cv)
        assert len(b.basis) == (cv.q - 1) ** 2
        assert b.checks["membership"] and b.checks["independent"]
        dims[name] = b.dim
    ok = all(dims[n] == (curve(n).q - 1) ** 2 for n in dims)
    record(2, ok, f"x^i y^j, i,j <= q-2 form a basis: {dims}")


def test_criterion_3_complete_linear_system():
    out = {}
    for name in GENUS_CONFIGS:
        b = fs.verify_L_of_D(curve(name))
        out[name] = (b.dim, b.checks["excluded_monomials"])
    ok = all(d == 4 and n == (curve(k).q + 1) ** 2 - 4 for k, (d, n) in out.items())
    record(3, ok, f"L(D) = <1,x,y,xy>: {out}")


def test_criterion_4_weierstrass():
    verdicts = {}
    for name in GENUS_CONFIGS:
        cv = curve(name)
        w = fs.weierstrass_check(cv)
        # witnesses: 1/(y - beta) has its only pole, of order q, at P_beta
        wit = True
        for P in cv.omega1 + cv.omega2:
            r = P.coords[0]
            den = (BiPoly.y(cv.ctx) if P.kind == "omega1" else BiPoly.x(cv.ctx)) - BiPoly.const(cv.ctx, r)
            wit &= ord_of_function(cv, den, P) == cv.q
            good, data = fs.q_in_semigroup(cv, P)
            wit &= good and data["pole_order"] == cv.q and data["regular_elsewhere"]
        verdicts[name] = bool(w["matches"] and w["affine_tested"] > 0 and wit)
    record(4, all(verdicts.values()), f"{{P : q in H(P)}} = Omega1 u Omega2: {verdicts}")


def test_criterion_5_group_order_and_structure():
    want = {"asm_p3": 36, "asm_p2e2": 96, "mixed_p3": 18}
    got = {}
    for name in want:
        t0 = time.perf_counter()
        G = group(name)
        rep = ag.verify_structure(G, curve(name))
        assert rep["sigma_order"] == curve(name).q ** 2
        got[name] = (G.order, time.perf_counter() - t0 < 10)
    ok = all(got[n] == (want[n], True) for n in want)
    record(5, ok, f"closure orders {{{', '.join(f'{n}: {o}' for n, (o, _) in got.items())}}}")


def test_criterion_6_exhaustive_oracle():
    cases = {"asm_p3": build_field(3, 2), "asm_p2e2": build_field(2, 2)}
    got = {}
    for name, ctx in cases.items():
        t0 = time.perf_counter()
        E = ag.exhaustive_stabilizer(curve(name), ctx)
        got[name] = (E.order, ag.same_group(E, group(name)), time.perf_counter() - t0 < 300)
    ok = got["asm_p3"] == (36, True, True) and got["asm_p2e2"] == (96, True, True)
    record(6, ok, f"PGL(3) stabilizers over F9 / F4: {got}")


def test_criterion_7_galois_points():
    want = {
        "asm_p3": {(1, 1, 0), (1, 2, 0)},
        "asm_p2e2": {(1, 1, 0), (1, 2, 0), (1, 3, 0)},
        "mixed_p3": set(),
    }
    found, generated = {}, {}
    for name, pts in want.items():
        cv, G = curve(name), group(name)
        reports = gl.galois_points(cv, G)
        gal = [r for r in reports if r.is_galois]
        assert all(r.group_order == 2 * cv.q for r in gal)
        found[name] = {r.point for r in gal}
        if cv.same_polys:
            generated[name] = gl.galois_group_generation_check(cv, G, reports)
    ok = found == want and all(generated.values())
    record(7, ok, f"Galois points {({n: len(p) for n, p in found.items()})}, generate Aut: {generated}")


def test_criterion_8_galois_lines():
    out = {}
    for name, count in (("mixed_p3", 20), ("lin_p2_x4x2x", 19)):
        cv, G = curve(name), group(name)
        ctx = gl.enum_field(cv)
        t0 = time.perf_counter()
        reports = gl.galois_lines(cv, G, ctx)
        s = gl.galois_line_summary(cv, reports, ctx)
        out[name] = (s["matches"], s["galois"] == count, time.perf_counter() - t0 < 600)
    cv = curve("lin_p2_x4x2x")
    ctx = gl.enum_field(cv)
    H1, H2 = gl.chord_line(cv)
    emb = embedding_map(cv.ctx, ctx)
    key = gl.line_key(ctx, [int(v) for v in emb[H1]], [int(v) for v in emb[H2]])
    rep = next(r for r in gl.galois_lines(cv, group("lin_p2_x4x2x"), ctx) if tuple(r.H1 + r.H2) == key)
    chord_ok = rep.deg_projection == 2 * cv.q - 2 and not rep.is_galois
    ok = all(all(v) for v in out.values()) and chord_ok
    record(8, ok, f"line families {out}, chord deg {rep.deg_projection} rejected={not rep.is_galois}")


def _field_axioms(F):
    a = np.arange(F.size)
    x, y, z = a[:, None, None], a[None, :, None], a[None, None, :]
    add, mul = F.add_t, F.mul_t
    ok = np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
    ok &= np.array_equal(add[add[x, y], z], add[x, add[y, z]])
    ok &= np.array_equal(mul[mul[x, y], z], mul[x, mul[y, z]])
    ok &= np.array_equal(mul[x, add[y, z]], add[mul[x, y], mul[x, z]])
    ok &= np.all(add[a, 0] == a) and np.all(mul[a, 1] == a)
    ok &= np.all(add[a, F.neg_t[a]] == 0) and np.all(mul[a[1:], F.inv_t[a[1:]]] == 1)
    return bool(ok)


def test_criterion_9_property_suites():
    checks = {}
    fields = [build_field(p, m) for p, m in ((2, 2), (2, 3), (3, 2), (2, 4), (5, 2))]
    checks["field_axioms"] = all(_field_axioms(F) for F in fields)
    frob = True
    for F in fields:
        fr = F.frob_table()
        a = np.arange(F.size)
        A, B = np.meshgrid(a, a, indexing="ij")
        frob &= np.array_equal(fr[F.add_t[A, B]], F.add_t[fr[A], fr[B]])
    checks["frobenius_additive"] = bool(frob)
    lin = True
    for name in ("asm_p3", "mixed_p3", "lin_p2_x4x2x", "asm_p3e2"):
        cv = curve(name)
        for L in (cv.L1, cv.L2):
            roots = [int(r) for r in root_space(L, cv.ctx)]
            rs = set(roots)
            lin &= len(roots) == cv.q and all(cv.ctx.add(r, s) in rs for r, s in itertools.product(roots, roots))
    checks["root_space_linear"] = lin
    resid = True
    for name in ("asm_p3", "mixed_p3", "asm_p2e2", "asm_p5"):
        cv = fs.affine_sample_curve(curve(name))
        for P in cv.places():
            resid &= cv.chart(P, 24).residual(cv).is_zero_to_prec()
    checks["chart_residual_zero"] = resid
    hom, faith = True, True
    for name in ("asm_p3", "mixed_p3", "asm_p2e2", "lin_p2_x4x2x"):
        hom &= ag.check_lift_homomorphism(group(name), curve(name))
        faith &= ag.action_on_omega(group(name), curve(name))["faithful"]
    checks["lift_homomorphism"] = hom
    checks["faithful_on_omega"] = faith
    record(9, all(checks.values()), f"property suites {checks}")


if __name__ == "__main__":
    pytest.main([__file__, "-q"])
