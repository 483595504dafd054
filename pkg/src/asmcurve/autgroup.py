"""Linear automorphisms of the plane model and of phi(X) in P^3.

Maps are projective matrices acting on column vectors of coordinates; the
affine part of a 3x3 map sends (x, y) to the dehomogenised image point.  The
generated group is built by breadth-first closure with deduplication on the
canonical form; ``exhaustive_stabilizer`` is the brute-force cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _config, kernels
from .curve import Curve, homogeneous_eval_many, rational_points
from .errors import (
    ClosureBudgetExceeded,
    LiftFailed,
    SearchBudgetExceeded,
    StructureMismatch,
    VerificationFailed,
)
from .gf import FieldCtx, build_field, embedding_map, subfield_elements
from .linpoly import subfield_index_k
from .poly import fconv, frob_power, fpow


def _matmul(ctx: FieldCtx, A, B):
    return ctx.vsum(ctx.mul_t[A[:, :, None], B[None, :, :]], axis=1)


class ProjMap:
    """Invertible n x n matrix modulo scalars, stored with its first nonzero entry (row-major) equal to 1."""

    __slots__ = ("ctx", "n", "m", "_key")

    def __init__(self, ctx: FieldCtx, entries, canonical: bool = False):
        m = np.array(entries, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("projective map needs a square matrix")
        if not canonical:
            flat = m.ravel()
            nz = np.flatnonzero(flat)
            if len(nz) == 0:
                raise ValueError("zero matrix")
            m = np.asarray(ctx.mul_t[ctx.inv(int(flat[nz[0]])), m], dtype=np.int64)
        self.ctx = ctx
        self.n = m.shape[0]
        self.m = m
        self.m.setflags(write=False)
        self._key = m.tobytes()

    @classmethod
    def identity(cls, ctx, n=3):
        return cls(ctx, np.eye(n, dtype=np.int64), canonical=True)

    @property
    def key(self) -> bytes:
        return self._key

    def __eq__(self, other):
        return isinstance(other, ProjMap) and self.ctx is other.ctx and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __matmul__(self, other: "ProjMap") -> "ProjMap":
        return ProjMap(self.ctx, _matmul(self.ctx, self.m, other.m))

    def __repr__(self):
        return f"ProjMap({self.m.tolist()})"

    def det(self) -> int:
        ctx = self.ctx
        A = self.m.copy()
        d = 1
        for c in range(self.n):
            nz = np.flatnonzero(A[c:, c])
            if len(nz) == 0:
                return 0
            r = c + int(nz[0])
            if r != c:
                A[[c, r]] = A[[r, c]]
                d = ctx.neg(d)
            d = ctx.mul(d, int(A[c, c]))
            inv = ctx.inv(int(A[c, c]))
            for k in range(c + 1, self.n):
                f = ctx.neg(ctx.mul(int(A[k, c]), inv))
                A[k] = ctx.add_t[A[k], ctx.mul_t[f, A[c]]]
        return d

    def inverse(self) -> "ProjMap":
        ctx = self.ctx
        n = self.n
        aug = np.concatenate([self.m, np.eye(n, dtype=np.int64)], axis=1)
        R, piv = kernels.row_reduce(aug, ctx.add_t, ctx.mul_t, ctx.inv_t, ctx.neg_t)
        if list(piv[:n]) != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return ProjMap(ctx, R[:, n:])

    def is_identity(self) -> bool:
        return self._key == ProjMap.identity(self.ctx, self.n)._key

    def order(self, bound: int = 10**6) -> int:
        k, P = 1, self
        while not P.is_identity():
            P = P @ self
            k += 1
            if k > bound:
                raise ClosureBudgetExceeded("element order beyond bound")
        return k

    def apply(self, pt):
        v = self.ctx.vsum(self.ctx.mul_t[self.m, np.asarray(pt, dtype=np.int64)[None, :]], axis=1)
        return normalize_point(self.ctx, v)

    def over(self, ctx: FieldCtx) -> "ProjMap":
        if ctx is self.ctx:
            return self
        return ProjMap(ctx, embedding_map(self.ctx, ctx)[self.m], canonical=True)

    def is_affine(self) -> bool:
        return self.n == 3 and self.m[2, 0] == 0 and self.m[2, 1] == 0

    def to_list(self):
        return self.m.tolist()


def normalize_point(ctx: FieldCtx, v) -> tuple:
    v = np.asarray(v, dtype=np.int64)
    nz = np.flatnonzero(v)
    if len(nz) == 0:
        raise ValueError("zero vector is not a projective point")
    return tuple(int(a) for a in ctx.mul_t[ctx.inv(int(v[nz[0]])), v])


# -- curve preservation --------------------------------------------------------


def _form_array(cv: Curve, ctx: FieldCtx):
    """The homogenised equation as a dense [a, b] array (X^a Y^b Z^(2q-a-b))."""
    emb = embedding_map(cv.ctx, ctx)
    d = 2 * cv.q
    F = np.zeros((d + 1, d + 1), dtype=np.int64)
    for (a, b, _), v in cv.homogeneous_terms.items():
        F[a, b] = emb[v]
    return F


def _log_p(a: int, p: int):
    """i with p^i = a, or None for a = 0."""
    if not a:
        return None
    i = 0
    while a > 1:
        a //= p
        i += 1
    return i


def compose_form(cv: Curve, M: ProjMap):
    """F(M v) as a dense [a, b] array over M.ctx."""
    ctx = M.ctx
    emb = embedding_map(cv.ctx, ctx)
    d = 2 * cv.q
    lin = []
    for r in range(3):
        l = np.zeros((2, 2), dtype=np.int64)
        l[1, 0], l[0, 1], l[0, 0] = M.m[r]
        lin.append(l)
    zpow = {}
    out = np.zeros((d + 1, d + 1), dtype=np.int64)
    for (a, b, c), v in cv.homogeneous_terms.items():
        ia, ib = _log_p(a, cv.p), _log_p(b, cv.p)
        term = np.ones((1, 1), dtype=np.int64)
        if ia is not None:
            term = fconv(ctx, term, frob_power(ctx, lin[0], ia))
        if ib is not None:
            term = fconv(ctx, term, frob_power(ctx, lin[1], ib))
        if c:
            if c not in zpow:
                zpow[c] = fpow(ctx, lin[2], c)
            term = fconv(ctx, term, zpow[c])
        term = ctx.mul_t[int(emb[v]), term]
        out[: term.shape[0], : term.shape[1]] = ctx.add_t[out[: term.shape[0], : term.shape[1]], term]
    return out


def preserves_curve(cv: Curve, M: ProjMap) -> bool:
    """True iff F(M v) is a nonzero multiple of F(v)."""
    if M.n != 3:
        raise ValueError("preserves_curve takes a 3x3 map")
    ctx = M.ctx
    F = _form_array(cv, ctx)
    G = compose_form(cv, M)
    lam = ctx.div(int(G[0, 0]), int(F[0, 0]))
    return lam != 0 and np.array_equal(G, ctx.mul_t[lam, F])


# -- generators and closure ----------------------------------------------------


def group_field(cv: Curve) -> FieldCtx:
    """Compositum of the working field and F_{p^k}."""
    k = subfield_index_k(cv.spec.L1, cv.spec.L2)
    return build_field(cv.p, math.lcm(cv.ctx.m, k))


def sigma(ctx, alpha, beta) -> ProjMap:
    return ProjMap(ctx, [[1, 0, alpha], [0, 1, beta], [0, 0, 1]], canonical=True)


def theta(ctx, lam) -> ProjMap:
    return ProjMap(ctx, [[lam, 0, 0], [0, ctx.inv(lam), 0], [0, 0, 1]])


def tau(ctx) -> ProjMap:
    return ProjMap(ctx, [[0, 1, 0], [1, 0, 0], [0, 0, 1]], canonical=True)


@dataclass
class Generators:
    ctx: FieldCtx
    sigmas: list
    thetas: list
    tau: ProjMap | None
    k: int

    def all(self) -> list:
        return self.sigmas + self.thetas + ([self.tau] if self.tau is not None else [])


def build_generators(cv: Curve, check: bool = True) -> Generators:
    ctx = group_field(cv)
    cvg = cv.over(ctx)
    k = subfield_index_k(cv.spec.L1, cv.spec.L2)
    sig = [sigma(ctx, a, b) for a in cvg.alphas for b in cvg.betas]
    lams = [int(l) for l in subfield_elements(ctx, k) if l]
    th = [theta(ctx, l) for l in lams]
    t = tau(ctx) if cv.same_polys else None
    gens = Generators(ctx, sig, th, t, k)
    if check:
        bad = [M for M in gens.all() if not preserves_curve(cvg, M)]
        if bad:
            raise VerificationFailed("generator does not preserve the curve", {"maps": [M.to_list() for M in bad]})
    return gens


@dataclass
class GroupClosure:
    ctx: FieldCtx
    elements: dict
    generators: list
    structure: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, M: ProjMap) -> bool:
        return M.over(self.ctx).key in self.elements if M.ctx.m <= self.ctx.m else False

    def __iter__(self):
        return iter(self.elements.values())

    def sorted(self) -> list:
        return [self.elements[k] for k in sorted(self.elements, key=lambda b: np.frombuffer(b, dtype=np.int64).tolist())]

    def keys(self) -> set:
        return set(self.elements)


def closure(gens, max_size: int | None = None) -> GroupClosure:
    """Breadth-first closure under right multiplication by the generators."""
    max_size = _config.MAX_CLOSURE if max_size is None else max_size
    gens = list(gens.all() if isinstance(gens, Generators) else gens)
    if not gens:
        raise ValueError("no generators")
    ctx = gens[0].ctx
    n = gens[0].n
    e = ProjMap.identity(ctx, n)
    elements = {e.key: e}
    frontier = [e]
    while frontier:
        nxt = []
        for A in frontier:
            for g in gens:
                B = A @ g
                if B.key not in elements:
                    elements[B.key] = B
                    if len(elements) > max_size:
                        raise ClosureBudgetExceeded(f"group exceeds {max_size} elements")
                    nxt.append(B)
        frontier = nxt
    return GroupClosure(ctx, elements, gens)


def expected_order(cv: Curve) -> int:
    k = subfield_index_k(cv.spec.L1, cv.spec.L2)
    base = cv.q**2 * (cv.p**k - 1)
    return 2 * base if cv.same_polys else base


# -- structure -------------------------------------------------------------------


def _is_translation(M: ProjMap) -> bool:
    m = M.m
    return m[0, 0] == 1 and m[1, 1] == 1 and m[2, 2] == 1 and not (m[0, 1] or m[1, 0] or m[2, 0] or m[2, 1])


def _power(M: ProjMap, k: int) -> ProjMap:
    P = ProjMap.identity(M.ctx, M.n)
    for _ in range(k):
        P = P @ M
    return P


def verify_structure(G: GroupClosure, cv: Curve) -> dict:
    """Check G = Sigma x| H with Sigma elementary abelian and H cyclic or dihedral; raise StructureMismatch."""
    ctx = G.ctx
    p, e = cv.p, cv.e
    k = subfield_index_k(cv.spec.L1, cv.spec.L2)
    Sigma = [M for M in G if _is_translation(M)]
    skeys = {M.key for M in Sigma}
    rep = {"order": G.order, "sigma_order": len(Sigma)}

    def fail(msg, **data):
        raise StructureMismatch(msg, {**rep, **data})

    if len(Sigma) != p ** (2 * e):
        fail("translation subgroup has the wrong order", expected=p ** (2 * e))
    for M in Sigma:
        if not M.is_identity() and not _power(M, p).is_identity():
            fail("translation of order other than p", map=M.to_list())
    for i, A in enumerate(Sigma):
        for B in Sigma[i + 1:]:
            if (A @ B).key != (B @ A).key:
                fail("translations do not commute")
    for g in G.generators:
        gi = g.inverse()
        for S in Sigma:
            if (g @ S @ gi).key not in skeys:
                fail("translation subgroup is not normal", map=g.to_list())
    rep["sigma_normal"] = rep["sigma_elementary_abelian"] = True

    lam = _field_generator(ctx, k)
    gamma = theta(ctx, lam)
    gens = [gamma]
    t = tau(ctx) if cv.same_polys else None
    if t is not None:
        gens.append(t)
    H = closure(gens)
    n_gamma = p**k - 1
    if gamma.order() != n_gamma:
        fail("torus generator has the wrong order", gamma=gamma.to_list())
    if H.keys() & skeys != {ProjMap.identity(ctx).key}:
        fail("Sigma and H intersect nontrivially")
    if not H.keys() <= G.keys():
        fail("H is not inside G")
    if len(Sigma) * H.order != G.order:
        fail("|G| != |Sigma| |H|", h_order=H.order)
    rep.update({"gamma": gamma.to_list(), "gamma_order": n_gamma, "h_order": H.order})
    if t is not None:
        if not (t @ t).is_identity():
            fail("tau is not an involution")
        if (t @ gamma @ t.inverse()).key != gamma.inverse().key:
            fail("tau gamma tau^-1 != gamma^-1")
        if H.order != 2 * n_gamma:
            fail("H is not dihedral of order 2(p^k-1)", h_order=H.order)
        rep["h_type"] = f"dihedral of order {2 * n_gamma}"
    else:
        if H.order != n_gamma:
            fail("H is not cyclic of order p^k-1", h_order=H.order)
        rep["h_type"] = f"cyclic of order {n_gamma}"
    G.structure = rep
    return rep


def _field_generator(ctx: FieldCtx, k: int) -> int:
    """Smallest generator of the multiplicative group of the copy of F_{p^k}."""
    n = ctx.p**k - 1
    for a in subfield_elements(ctx, k):
        a = int(a)
        if a and all(ctx.pow(a, n // r) != 1 for r in _prime_factors(n)):
            return a
    return 1


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- the embedding phi = (x : y : 1 : xy) ----------------------------------------


def phi_point(ctx: FieldCtx, a: int, b: int) -> tuple:
    return (a, b, 1, ctx.mul(a, b))


def lift_to_P3(M: ProjMap, cv: Curve, check: bool = True) -> ProjMap:
    """The 4x4 map N with phi(M P) = N phi(P), acting on the basis (x, y, 1, xy) of L(D)."""
    ctx = M.ctx
    if M.n != 3:
        raise ValueError("lift_to_P3 takes a 3x3 map")
    if not M.is_affine():
        raise LiftFailed("x, y do not pull back into L(D) under a map moving the line Z=0")
    m = M.m
    s = ctx.inv(int(m[2, 2]))
    (a, b, c), (d, e, f) = ([ctx.mul(s, int(v)) for v in m[r]] for r in (0, 1))
    # x' = a x + b y + c, y' = d x + e y + f; x'y' must avoid x^2 and y^2
    if ctx.mul(a, d) or ctx.mul(b, e):
        raise LiftFailed("x'y' leaves the span of 1, x, y, xy", {"map": M.to_list()})
    w = [ctx.add(ctx.mul(a, f), ctx.mul(c, d)), ctx.add(ctx.mul(b, f), ctx.mul(c, e)),
         ctx.mul(c, f), ctx.add(ctx.mul(a, e), ctx.mul(b, d))]
    N = ProjMap(ctx, [[a, b, c, 0], [d, e, f, 0], [0, 0, 1, 0], w])
    if check:
        _check_lift(M, N, cv)
    return N


def _check_lift(M: ProjMap, N: ProjMap, cv: Curve):
    ctx = M.ctx
    if N.apply((0, 0, 0, 1)) != (0, 0, 0, 1):
        raise LiftFailed("lift does not fix (0:0:0:1)")
    emb = embedding_map(cv.ctx, ctx)
    for a, b in cv.affine_points[:32]:
        a, b = int(emb[a]), int(emb[b])
        img = M.apply((a, b, 1))
        if img[2] == 0:
            continue
        x2, y2 = ctx.div(img[0], img[2]), ctx.div(img[1], img[2])
        if N.apply(phi_point(ctx, a, b)) != normalize_point(ctx, phi_point(ctx, x2, y2)):
            raise LiftFailed("lift does not intertwine phi", {"point": [a, b]})


def lift_group(G: GroupClosure, cv: Curve) -> dict:
    """key of M -> lift(M)."""
    cvg = cv.over(G.ctx)
    return {key: lift_to_P3(M, cvg, check=False) for key, M in G.elements.items()}


def omega_points(cv: Curve, ctx: FieldCtx) -> list:
    """phi(P_beta) = (1:0:0:beta) then phi(Q_alpha) = (0:1:0:alpha), in place order."""
    emb = embedding_map(cv.ctx, ctx)
    return [(1, 0, 0, int(emb[b])) for b in cv.betas] + [(0, 1, 0, int(emb[a])) for a in cv.alphas]


def omega_permutation(N: ProjMap, cv: Curve) -> tuple:
    pts = omega_points(cv, N.ctx)
    index = {P: i for i, P in enumerate(pts)}
    try:
        return tuple(index[N.apply(P)] for P in pts)
    except KeyError as exc:
        raise VerificationFailed("map does not preserve the places at infinity") from exc


def action_on_omega(G: GroupClosure, cv: Curve) -> dict:
    """Permutation action on Omega_1 u Omega_2; checks faithfulness and that maps fixing P', Q' keep Omega_1."""
    cvg = cv.over(G.ctx)
    q = cv.q
    perms = {}
    keeps = True
    for key, M in G.elements.items():
        perm = omega_permutation(lift_to_P3(M, cvg, check=False), cvg)
        perms[key] = perm
        fixes_pq = M.apply((1, 0, 0)) == (1, 0, 0) and M.apply((0, 1, 0)) == (0, 1, 0)
        if fixes_pq and not all(i < q for i in perm[:q]):
            keeps = False
    return {
        "faithful": len(set(perms.values())) == len(perms),
        "preserves_omega": True,
        "fixing_maps_keep_omega1": keeps,
        "orbits": _orbits(perms.values(), 2 * q),
    }


def _orbits(perms, n) -> list:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in perms:
        for i, j in enumerate(perm):
            parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def lift_pairs(G: GroupClosure, max_pairs: int | None = None) -> list:
    """Pairs (A, B) to test: all of G x G when small, else G x generators.

    lift(A g) = lift(A) lift(g) for every A and every generator g already
    forces lift(A N) = lift(A) lift(N) for all N, by induction on the length
    of N as a word in the generators.
    """
    max_pairs = _config.MAX_LIFT_PAIRS if max_pairs is None else max_pairs
    items = list(G.elements.values())
    if len(items) ** 2 <= max_pairs or not G.generators:
        return [(A, B) for A in items for B in items]
    gens = [g.over(G.ctx) for g in G.generators]
    return [(A, g) for A in items for g in gens]


def check_lift_homomorphism(G: GroupClosure, cv: Curve, max_pairs: int | None = None) -> bool:
    lifts = lift_group(G, cv)
    cvg = cv.over(G.ctx)
    for A, B in lift_pairs(G, max_pairs):
        NB = lifts.get(B.key) or lift_to_P3(B, cvg, check=False)
        if (lifts[A.key] @ NB).key != lifts[(A @ B).key].key:
            return False
    return True


# -- exhaustive search -------------------------------------------------------------


def exhaustive_stabilizer(cv: Curve, search_ctx: FieldCtx,
                          max_candidates: int | None = None) -> GroupClosure:
    """Every element of PGL(3, search_ctx) preserving the plane model.

    A preserving map sends (1:0:0) and (0:1:0) to rational curve points, so
    the first column runs over normalised curve points, the second over
    nonzero multiples of curve points and the third over all vectors.
    Candidates are pruned on up to five rational curve points, then on all
    of them, and finally confirmed by the exact polynomial identity.
    """
    max_candidates = _config.MAX_STABILIZER_CANDIDATES if max_candidates is None else max_candidates
    cvs = cv.over(search_ctx)
    ctx = search_ctx
    N = ctx.size
    pts = rational_points(cvs, ctx)
    scal = np.arange(1, N)
    col2s = np.asarray(ctx.mul_t[scal[:, None, None], pts[None, :, :]], dtype=np.int64).reshape(-1, 3)
    col3s = np.indices((N, N, N)).reshape(3, -1).T.copy()
    total = len(pts) * len(col2s) * len(col3s)
    if total > max_candidates:
        raise SearchBudgetExceeded(f"{total} candidate matrices exceed the budget of {max_candidates}")
    on_curve = np.zeros(N**3, dtype=np.bool_)
    on_curve[pts[:, 0] * N * N + pts[:, 1] * N + pts[:, 2]] = True
    test = pts[:5]
    raw = kernels.stabilizer_scan(pts, col2s, col3s, test, on_curve,
                                  ctx.add_t, ctx.mul_t, ctx.inv_t, ctx.neg_t, N)
    found = {}
    for row in raw:
        M = ProjMap(ctx, row.reshape(3, 3))
        if M.key in found:
            continue
        imgs = homogeneous_eval_many(cvs, ctx.vsum(ctx.mul_t[M.m[None, :, :], pts[:, None, :]], axis=2), ctx)
        if np.any(imgs):
            continue
        if preserves_curve(cvs, M):
            found[M.key] = M
    G = GroupClosure(ctx, found, [])
    G.structure = {"candidates": total, "scan_survivors": int(len(raw)), "rational_points": int(len(pts))}
    return G


def same_group(A: GroupClosure, B: GroupClosure) -> bool:
    """Equality of two finite groups of maps after embedding into a common field."""
    ctx = A.ctx if A.ctx.m >= B.ctx.m else B.ctx
    ka = {M.over(ctx).key for M in A}
    kb = {M.over(ctx).key for M in B}
    return ka == kb
