"""Truncated Laurent series and local charts at the places of a curve.

A :class:`LaurentSeries` stores ``sum_k coeffs[k] t^(val+k) + O(t^prec)``.
Arithmetic keeps ``prec`` honest: every coefficient below ``prec`` is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _config, kernels
from .errors import (
    PrecisionBudgetExceeded,
    SingularPoint,
    ZeroCovector,
    ZeroFunction,
)
from .gf import FieldCtx
from .poly import BiPoly


class LaurentSeries:
    __slots__ = ("ctx", "val", "coeffs", "prec")

    def __init__(self, ctx: FieldCtx, val: int, coeffs, prec: int):
        coeffs = np.asarray(coeffs, dtype=np.int64)[: max(prec - val, 0)]
        nz = np.nonzero(coeffs)[0]
        if len(nz) == 0:
            val, coeffs = prec, coeffs[:0]
        elif nz[0]:
            val += int(nz[0])
            coeffs = coeffs[nz[0]:]
        if len(coeffs) < prec - val:
            coeffs = np.concatenate([coeffs, np.zeros(prec - val - len(coeffs), dtype=np.int64)])
        self.ctx = ctx
        self.val = int(val)
        self.coeffs = coeffs
        self.prec = int(prec)

    # -- constructors -----------------------------------------------------

    @classmethod
    def poly(cls, ctx, coeffs, prec, val=0):
        """Exact polynomial ``sum coeffs[k] t^(val+k)`` viewed to precision ``prec``."""
        return cls(ctx, val, coeffs, prec)

    @classmethod
    def const(cls, ctx, c, prec):
        return cls(ctx, 0, [c], prec)

    @classmethod
    def monomial(cls, ctx, k, prec, c=1):
        return cls(ctx, k, [c], prec)

    # -- queries -------------------------------------------------------------

    def is_zero_to_prec(self) -> bool:
        return self.val >= self.prec

    def order(self):
        """Valuation, or ``None`` when every known coefficient is zero."""
        return None if self.is_zero_to_prec() else self.val

    def coeff(self, k: int) -> int:
        if k >= self.prec:
            raise PrecisionBudgetExceeded(f"coefficient t^{k} beyond precision {self.prec}")
        if k < self.val:
            return 0
        return int(self.coeffs[k - self.val])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of t^lo .. t^(hi-1) (all must be below prec)."""
        if hi > self.prec:
            raise PrecisionBudgetExceeded(f"window up to t^{hi} beyond precision {self.prec}")
        out = np.zeros(hi - lo, dtype=np.int64)
        a, b = max(lo, self.val), hi
        if a < b:
            out[a - lo:b - lo] = self.coeffs[a - self.val:b - self.val]
        return out

    def __repr__(self):
        terms = [f"{c}*t^{self.val + k}" for k, c in enumerate(self.coeffs[:6]) if c]
        return f"({' + '.join(terms) or '0'} + O(t^{self.prec}))"

    # -- arithmetic ------------------------------------------------------------

    def _aligned(self, other):
        lo = min(self.val, other.val)
        hi = min(self.prec, other.prec)
        return lo, hi, self.window(lo, max(lo, hi)), other.window(lo, max(lo, hi))

    def __add__(self, other):
        lo, hi, a, b = self._aligned(other)
        return LaurentSeries(self.ctx, lo, self.ctx.add_t[a, b], hi)

    def __sub__(self, other):
        lo, hi, a, b = self._aligned(other)
        return LaurentSeries(self.ctx, lo, self.ctx.add_t[a, self.ctx.neg_t[b]], hi)

    def __neg__(self):
        return LaurentSeries(self.ctx, self.val, self.ctx.neg_t[self.coeffs], self.prec)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(int(other))
        ctx = self.ctx
        if self.is_zero_to_prec() or other.is_zero_to_prec():
            val = self.val + other.val
            return LaurentSeries(ctx, val, [], min(self.prec + other.val, other.prec + self.val))
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = prec - val
        c = kernels.series_mul(self.coeffs, other.coeffs, n, ctx.add_t, ctx.mul_t)
        return LaurentSeries(ctx, val, c, prec)

    def scale(self, c: int):
        return LaurentSeries(self.ctx, self.val, self.ctx.mul_t[c, self.coeffs], self.prec)

    def shift(self, k: int):
        """Multiply by t^k."""
        return LaurentSeries(self.ctx, self.val + k, self.coeffs, self.prec + k)

    def truncate(self, prec: int):
        return LaurentSeries(self.ctx, self.val, self.coeffs, min(prec, self.prec))

    def frob(self, i: int):
        """self^(p^i), exact in characteristic p."""
        k = self.ctx.p**i
        if self.is_zero_to_prec():
            return LaurentSeries(self.ctx, self.val * k, [], self.prec * k)
        c = np.zeros((len(self.coeffs) - 1) * k + 1, dtype=np.int64)
        c[::k] = self.ctx.frob_table(i)[self.coeffs]
        return LaurentSeries(self.ctx, self.val * k, c, self.prec * k)

    def inverse(self):
        if self.is_zero_to_prec():
            raise ZeroDivisionError("series is zero to known precision")
        ctx = self.ctx
        r = self.prec - self.val
        a = self.coeffs
        b = np.array([ctx.inv(int(a[0]))], dtype=np.int64)
        n = 1
        while n < r:
            n = min(2 * n, r)
            e = kernels.series_mul(a[:n], b, n, ctx.add_t, ctx.mul_t)
            e = np.asarray(ctx.neg_t[e], dtype=np.int64)
            e[0] = ctx.add(int(e[0]), ctx.from_int(2))
            b = kernels.series_mul(b, e, n, ctx.add_t, ctx.mul_t)
        return LaurentSeries(ctx, -self.val, b, -self.val + r)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeries.const(self.ctx, 1, self.prec - self.val)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def same_as(self, other) -> bool:
        """Equal up to the smaller precision."""
        d = self - other
        return d.is_zero_to_prec()


def lin_apply(L, S: LaurentSeries) -> LaurentSeries:
    """L(S) for a linearized polynomial whose coefficients live in S.ctx."""
    acc = None
    for i, a in enumerate(L.coeffs):
        if a.value:
            term = S.frob(i).scale(a.value)
            acc = term if acc is None else acc + term
    return acc


# -- local charts ----------------------------------------------------------------


@dataclass
class LocalChart:
    place: object
    parameter: str
    x: LaurentSeries
    y: LaurentSeries
    prec: int
    _xp: dict = field(default_factory=dict, repr=False)
    _yp: dict = field(default_factory=dict, repr=False)
    _mono: dict = field(default_factory=dict, repr=False)

    def xpow(self, i: int) -> LaurentSeries:
        if i not in self._xp:
            self._xp[i] = LaurentSeries.const(self.x.ctx, 1, self.prec) if i == 0 else self.xpow(i - 1) * self.x
        return self._xp[i]

    def ypow(self, j: int) -> LaurentSeries:
        if j not in self._yp:
            self._yp[j] = LaurentSeries.const(self.y.ctx, 1, self.prec) if j == 0 else self.ypow(j - 1) * self.y
        return self._yp[j]

    def monomial(self, i: int, j: int) -> LaurentSeries:
        key = (i, j)
        if key not in self._mono:
            self._mono[key] = self.xpow(i) * self.ypow(j)
        return self._mono[key]

    def evaluate(self, f: BiPoly) -> LaurentSeries:
        acc = None
        for (i, j), c in f.terms.items():
            term = self.monomial(i, j).scale(c)
            acc = term if acc is None else acc + term
        if acc is None:
            return LaurentSeries(self.x.ctx, self.prec, [], self.prec)
        return acc

    def residual(self, cv) -> LaurentSeries:
        """L1(x(t)) L2(y(t)) + c, which must vanish to its precision."""
        ctx = self.x.ctx
        return lin_apply(cv.L1, self.x) * lin_apply(cv.L2, self.y) + LaurentSeries.const(ctx, cv.c, self.prec)


def _solve_additive(L, rhs: LaurentSeries, max_iter: int = 64) -> LaurentSeries:
    """Solve L(s) = rhs for s with ord(s) >= 1 by s <- (rhs - sum_{j>=1} a_j s^(p^j)) / a_0."""
    ctx = rhs.ctx
    a0inv = ctx.inv(L.coeffs[0].value)
    s = rhs.scale(a0inv)
    for _ in range(max_iter):
        acc = rhs
        for j, a in enumerate(L.coeffs):
            if j and a.value:
                acc = acc - s.frob(j).scale(a.value)
        new = acc.scale(a0inv).truncate(rhs.prec)
        if new.same_as(s) and new.prec == s.prec:
            return new
        s = new
    raise PrecisionBudgetExceeded("fixed-point iteration did not settle")  # pragma: no cover


def _infinity_chart(cv, L_pole, L_fib, root, prec):
    # chart at the pole of the coordinate governed by L_pole; the other coordinate is root + s
    ctx = cv.ctx
    q = cv.q
    p = cv.p
    u = np.zeros(q + 1, dtype=np.int64)
    for i, a in enumerate(L_pole.coeffs):
        if a.value:
            u[q - p**i] = a.value
    work = prec + q
    useries = LaurentSeries.poly(ctx, u, work)
    rhs = useries.inverse().shift(q).scale(ctx.neg(cv.c)).truncate(prec)
    s = _solve_additive(L_fib, rhs)
    pole = LaurentSeries.monomial(ctx, -1, 2 * prec + q)  # exact
    fib = s + LaurentSeries.const(ctx, root, prec)
    return pole, fib


def _affine_chart(cv, L_par, L_dep, a, b, prec):
    # parameter t = u - a for the coordinate u governed by L_par; the other is b + s
    ctx = cv.ctx
    A = L_par.eval_enc(ctx, a)
    lt = np.zeros(cv.q + 1, dtype=np.int64)
    for i, coef in enumerate(L_par.coeffs):
        if coef.value:
            lt[cv.p**i] = coef.value
    lt[0] = A
    denom = LaurentSeries.poly(ctx, lt, prec)  # L_par(a + t) = A + L_par(t)
    rhs = LaurentSeries.const(ctx, ctx.inv(A), prec) - denom.inverse()
    rhs = rhs.scale(cv.c)
    s = _solve_additive(L_dep, rhs)
    par = LaurentSeries.poly(ctx, [a, 1], 2 * prec + cv.q)  # exact
    dep = s + LaurentSeries.const(ctx, b, prec)
    return par, dep


def expand_at(cv, P, prec: int) -> LocalChart:
    """Local expansions of x and y at a place, to absolute precision ``prec``."""
    if prec < 1:
        raise ValueError("precision must be positive")
    ctx = cv.ctx
    if P.kind == "omega1":
        (beta,) = P.coords
        x, y = _infinity_chart(cv, cv.L1, cv.L2, beta, prec)
        return LocalChart(P, "1/x", x, y, prec)
    if P.kind == "omega2":
        (alpha,) = P.coords
        y, x = _infinity_chart(cv, cv.L2, cv.L1, alpha, prec)
        return LocalChart(P, "1/y", x, y, prec)
    a, b = P.coords
    dFdy = ctx.mul(cv.L2.coeffs[0].value, cv.L1.eval_enc(ctx, a))
    dFdx = ctx.mul(cv.L1.coeffs[0].value, cv.L2.eval_enc(ctx, b))
    if dFdx == 0 and dFdy == 0:
        raise SingularPoint(f"both partials vanish at {P}")
    if dFdy != 0:
        x, y = _affine_chart(cv, cv.L1, cv.L2, a, b, prec)
        return LocalChart(P, "x-a", x, y, prec)
    y, x = _affine_chart(cv, cv.L2, cv.L1, b, a, prec)
    return LocalChart(P, "y-b", x, y, prec)


# -- orders ----------------------------------------------------------------------

def _ord_with_retry(cv, P, f: BiPoly, prec, max_doublings):
    prec = prec or max(cv.default_precision(), f.degree_x() + f.degree_y() + 1)
    for _ in range(max_doublings + 1):
        s = cv.chart(P, prec).evaluate(f)
        if not s.is_zero_to_prec():
            return s.val
        prec *= 2
    raise PrecisionBudgetExceeded(f"no nonzero coefficient of {f} at {P.label()} below t^{prec // 2}")


def ord_of_function(cv, f: BiPoly, P, prec: int | None = None,
                    max_doublings: int | None = None) -> int:
    """ord_P of a polynomial function in x, y."""
    max_doublings = _config.MAX_PRECISION_DOUBLINGS if max_doublings is None else max_doublings
    if cv.reduce(f).is_zero():
        raise ZeroFunction(f"{f} vanishes identically on the curve")
    return _ord_with_retry(cv, P, f, prec, max_doublings)


HYPERPLANE_COORDS = ((1, 0), (0, 1), (0, 0), (1, 1))  # phi = (x : y : 1 : xy)


def normalizer_order(cv, P) -> int:
    """min over the coordinates of phi of their orders at P."""
    if P.kind == "affine":
        return 0
    return -1


def hyperplane_function(cv, H) -> BiPoly:
    H = [int(h) for h in H]
    if len(H) != 4:
        raise ValueError("a hyperplane of P^3 has four coefficients")
    if not any(H):
        raise ZeroCovector("hyperplane covector is zero")
    return BiPoly(cv.ctx, {mono: h for mono, h in zip(HYPERPLANE_COORDS, H) if h})


def ord_of_hyperplane(cv, H, P, prec: int | None = None,
                      max_doublings: int | None = None) -> int:
    """Intersection multiplicity at P of phi(X) with the hyperplane H (coefficients on X, Y, Z, W)."""
    max_doublings = _config.MAX_PRECISION_DOUBLINGS if max_doublings is None else max_doublings
    h = hyperplane_function(cv, H)
    prec = prec or 2 * cv.q + 2
    return _ord_with_retry(cv, P, h, prec, max_doublings) - normalizer_order(cv, P)
