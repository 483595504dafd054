"""Polynomials over a FieldCtx.

``BiPoly`` is a sparse polynomial in x, y (dict of exponent pairs to
encodings); dense arrays of encodings are used for homogeneous forms, with
``fconv`` as the multiplication.
"""
from __future__ import annotations

import numpy as np

from .gf import FieldCtx


def fconv(ctx: FieldCtx, A, B):
    """Full N-d convolution of two arrays of field encodings."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if np.count_nonzero(A) < np.count_nonzero(B):
        A, B = B, A
    shape = tuple(a + b - 1 for a, b in zip(A.shape, B.shape))
    out = np.zeros(shape, dtype=np.int64)
    for idx in zip(*np.nonzero(B)):
        sl = tuple(slice(i, i + n) for i, n in zip(idx, A.shape))
        out[sl] = ctx.add_t[out[sl], ctx.mul_t[B[idx], A]]
    return out


def fadd(ctx: FieldCtx, A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    shape = tuple(max(a, b) for a, b in zip(A.shape, B.shape))
    out = np.zeros(shape, dtype=np.int64)
    out[tuple(slice(0, n) for n in A.shape)] = A
    sl = tuple(slice(0, n) for n in B.shape)
    out[sl] = ctx.add_t[out[sl], B]
    return out


def fscale(ctx: FieldCtx, s: int, A):
    return np.asarray(ctx.mul_t[s, np.asarray(A, dtype=np.int64)], dtype=np.int64)


def fpow(ctx: FieldCtx, A, n: int):
    result = np.ones((1,) * np.ndim(A), dtype=np.int64)
    base = np.asarray(A, dtype=np.int64)
    while n:
        if n & 1:
            result = fconv(ctx, result, base)
        n >>= 1
        if n:
            base = fconv(ctx, base, base)
    return result


def frob_power(ctx: FieldCtx, A, i: int):
    """A^(p^i) for a dense polynomial: coefficients Frobenius-twisted, exponents scaled."""
    A = np.asarray(A, dtype=np.int64)
    k = ctx.p**i
    out = np.zeros(tuple((n - 1) * k + 1 for n in A.shape), dtype=np.int64)
    tw = ctx.frob_table(i)
    out[tuple(slice(None, None, k) for _ in A.shape)] = tw[A]
    return out


class BiPoly:
    """Sparse polynomial in x, y with coefficients in ``ctx``."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms=None):
        self.ctx = ctx
        self.terms = {k: int(v) for k, v in (terms or {}).items() if int(v)}

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, {(0, 0): c})

    @classmethod
    def x(cls, ctx):
        return cls(ctx, {(1, 0): 1})

    @classmethod
    def y(cls, ctx):
        return cls(ctx, {(0, 1): 1})

    @classmethod
    def monomial(cls, ctx, i, j, c=1):
        return cls(ctx, {(i, j): c})

    def _lift(self, other):
        if isinstance(other, BiPoly):
            return other
        return BiPoly.const(self.ctx, self.ctx.from_int(int(other)))

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = self.ctx.add(t.get(k, 0), v)
        return BiPoly(self.ctx, t)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.ctx, {k: self.ctx.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        ctx = self.ctx
        t = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                key = (i + k, j + l)
                t[key] = ctx.add(t.get(key, 0), ctx.mul(a, b))
        return BiPoly(ctx, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = BiPoly.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: int):
        return BiPoly(self.ctx, {k: self.ctx.mul(c, v) for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=0)

    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=0)

    def evaluate(self, a: int, b: int) -> int:
        ctx = self.ctx
        acc = 0
        for (i, j), c in self.terms.items():
            acc = ctx.add(acc, ctx.mul(c, ctx.mul(ctx.pow(a, i), ctx.pow(b, j))))
        return acc

    def map_coeffs(self, table, ctx: FieldCtx | None = None) -> "BiPoly":
        """Apply an encoding map (e.g. a field embedding) to every coefficient."""
        return BiPoly(ctx or self.ctx, {k: int(table[v]) for k, v in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(s for s in (f"x^{i}" if i > 1 else "x" if i else "", f"y^{j}" if j > 1 else "y" if j else "") if s)
            parts.append(f"{c}*{mono}" if mono and c != 1 else (mono or str(c)))
        return " + ".join(parts)
