"""Linearized (additive) polynomials  L(x) = sum_i a_i x^(p^i)."""
from __future__ import annotations

import math
from functools import reduce

import numpy as np

from . import _config
from .errors import (
    CtxMismatch,
    FieldTooLarge,
    FieldTooSmall,
    NotMonic,
    SearchBudgetExceeded,
    ZeroLinearTerm,
)
from .gf import FieldCtx, FieldElement, build_field, embedding_map


class LinearizedPoly:
    """Monic additive polynomial with nonzero linear term.

    ``coeffs[i]`` is the coefficient of ``x^(p^i)``, so ``coeffs[-1] == 1``.
    """

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("empty coefficient list")
        ctx = coeffs[0].ctx
        for a in coeffs:
            if a.ctx is not ctx:
                raise CtxMismatch("coefficients live in different fields")
        if len(coeffs) < 2:
            raise ValueError("degree p^e with e >= 1 required")
        if coeffs[-1].value != 1:
            raise NotMonic(f"leading coefficient is {coeffs[-1].value}, expected 1")
        if coeffs[0].value == 0:
            raise ZeroLinearTerm("coefficient of x must be nonzero")
        self.ctx: FieldCtx = ctx
        self.coeffs = coeffs
        self.p = ctx.p
        self.e = len(coeffs) - 1
        self.q = self.p**self.e

    @classmethod
    def from_encodings(cls, ctx: FieldCtx, encs) -> "LinearizedPoly":
        return cls([ctx(int(a)) for a in encs])

    @property
    def encodings(self) -> tuple:
        return tuple(a.value for a in self.coeffs)

    def support(self) -> list:
        """Indices i > 0 with a nonzero coefficient."""
        return [i for i, a in enumerate(self.coeffs) if i > 0 and a.value]

    def over(self, target: FieldCtx) -> "LinearizedPoly":
        """Same polynomial with coefficients embedded into ``target``."""
        if target is self.ctx:
            return self
        emb = embedding_map(self.ctx, target)
        return LinearizedPoly([target(int(emb[a.value])) for a in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, LinearizedPoly) and self.ctx is other.ctx and self.encodings == other.encodings

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.encodings))

    def __repr__(self):
        terms = []
        for i in range(self.e, -1, -1):
            a = self.coeffs[i].value
            if a:
                mono = f"x^{self.p**i}" if i else "x"
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return f"L[{self.ctx}]({' + '.join(terms)})"

    # -- evaluation --------------------------------------------------------

    def eval_enc(self, ctx: FieldCtx, a: int) -> int:
        """L(a) for an encoding ``a`` of ``ctx`` (coefficients embedded as needed)."""
        L = self.over(ctx)
        acc = 0
        for i, c in enumerate(L.coeffs):
            if c.value:
                acc = ctx.add(acc, ctx.mul(c.value, ctx.frob(a, i)))
        return acc

    def values(self, ctx: FieldCtx) -> np.ndarray:
        """L evaluated at every element of ``ctx`` (index = encoding)."""
        L = self.over(ctx)
        out = np.zeros(ctx.size, dtype=np.int64)
        for i, c in enumerate(L.coeffs):
            if c.value:
                out = ctx.add_t[out, ctx.mul_t[c.value, ctx.frob_table(i)]]
        return np.asarray(out, dtype=np.int64)


def lin_eval(L: LinearizedPoly, a: FieldElement) -> FieldElement:
    try:
        return FieldElement(a.ctx, L.eval_enc(a.ctx, a.value))
    except ValueError as exc:  # not a subfield
        raise CtxMismatch(str(exc)) from exc


def count_roots(L: LinearizedPoly, ctx: FieldCtx) -> int:
    return int(np.count_nonzero(L.values(ctx) == 0))


def splitting_degree(L: LinearizedPoly, max_bits: int | None = None) -> int:
    """Smallest degree of a field (over F_p) holding the coefficients and all p^e roots."""
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    base = L.ctx.m
    m = base
    while True:
        try:
            ctx = build_field(L.p, m, max_bits=max_bits)
        except FieldTooLarge as exc:
            raise SearchBudgetExceeded(f"no splitting field of {L} within 2^{max_bits}") from exc
        if count_roots(L, ctx) == L.q:
            return m
        m += base


def root_space(L: LinearizedPoly, ctx: FieldCtx) -> list:
    """All roots of L in ``ctx`` in encoding order; must be the full p^e of them."""
    if ctx.m % L.ctx.m:
        raise FieldTooSmall(f"{ctx} does not contain the coefficients of {L}")
    roots = np.nonzero(L.values(ctx) == 0)[0]
    if len(roots) != L.q:
        raise FieldTooSmall(f"{ctx} holds only {len(roots)} of the {L.q} roots of {L}")
    return [FieldElement(ctx, int(r)) for r in roots]


def subfield_index_k(L1: LinearizedPoly, L2: LinearizedPoly) -> int:
    """k with F_{p^k} the intersection of F_{p^i} over all nonzero positive indices of L1 and L2."""
    if L1.p != L2.p:
        raise CtxMismatch("polynomials in different characteristics")
    return reduce(math.gcd, L1.support() + L2.support())
