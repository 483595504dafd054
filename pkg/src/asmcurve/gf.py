"""Finite fields F_{p^m} with table arithmetic.

An element is stored by its canonical integer encoding ``enc(a) = sum c_i p^i``
where ``a = sum c_i g^i`` and ``g`` is the class of ``x`` modulo the field's
modulus.  The modulus is the smallest monic irreducible polynomial of degree
``m`` under the same encoding of its lower coefficients, so a context is fully
determined by ``(p, m)``.

Most of the package works directly on encodings through the table helpers of
:class:`FieldCtx`; :class:`FieldElement` is the friendly wrapper.
"""
from __future__ import annotations

import itertools
import math
from functools import cached_property, lru_cache

import numpy as np

from . import _config
from .errors import (
    CharMismatch,
    CtxMismatch,
    DegreeZero,
    FieldTooLarge,
    NonPrime,
    NotADivisor,
    NotASubfield,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


# --- dense polynomials over F_p (coefficient lists, low degree first) --------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod_p(a, b, p):
    """Remainder of a by monic b over F_p."""
    a = [x % p for x in a]
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(a[:db])


def _monic_polys(p, d):
    for low in itertools.product(range(p), repeat=d):
        yield list(low) + [1]


def is_irreducible(f, p) -> bool:
    """Trial division of a monic polynomial by every monic polynomial of degree 1..deg/2."""
    m = len(f) - 1
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for g in _monic_polys(p, d):
            if not _polymod_p(f, g, p):
                return False
    return True


def smallest_irreducible(p, m):
    # enumerate lower coefficients in increasing encoding order
    for n in range(p**m):
        low = [(n // p**i) % p for i in range(m)]
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldCtx:
    """The field F_{p^m}; immutable, one instance per ``(p, m)``."""

    def __init__(self, p: int, m: int, modulus: tuple):
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.size = p**m
        self.weights = np.array([p**i for i in range(m)], dtype=np.int64)
        self._build_log_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __reduce__(self):
        return (build_field, (self.p, self.m))

    # -- construction of the tables --------------------------------------

    def _mul_poly(self, a, b):
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        res = _polymod_p(prod, list(self.modulus), p)
        return res + [0] * (m - len(res))

    def _build_log_tables(self):
        N, p, m = self.size, self.p, self.m
        self.digits = ((np.arange(N)[:, None] // self.weights[None, :]) % p).astype(np.int64)
        if N == 2:
            self.exp = np.array([1], dtype=np.int64)
            self.log = np.array([-1, 0], dtype=np.int64)
            self.generator = 1
            return
        for g in range(2, N):
            gd = list(self.digits[g])
            powers = [1]
            cur = [1] + [0] * (m - 1)
            while True:
                cur = self._mul_poly(cur, gd)
                e = int(np.dot(cur, self.weights))
                if e == 1:
                    break
                powers.append(e)
            if len(powers) == N - 1:
                self.generator = g
                self.exp = np.array(powers, dtype=np.int64)
                log = np.full(N, -1, dtype=np.int64)
                log[self.exp] = np.arange(N - 1)
                self.log = log
                return
        raise AssertionError("no primitive element")  # pragma: no cover

    @cached_property
    def mul_t(self):
        N = self.size
        a = np.arange(N)
        la = self.log[a]
        s = (la[:, None] + la[None, :]) % (N - 1)
        t = self.exp[s]
        t[0, :] = 0
        t[:, 0] = 0
        return t.astype(np.int32 if N > 127 else np.int64)

    @cached_property
    def add_t(self):
        N, p = self.size, self.p
        if p == 2:
            a = np.arange(N)
            t = a[:, None] ^ a[None, :]
        else:
            d = self.digits
            t = np.zeros((N, N), dtype=np.int64)
            for i in range(self.m):
                t += ((d[:, i][:, None] + d[:, i][None, :]) % p) * self.weights[i]
        return t.astype(np.int32 if N > 127 else np.int64)

    @cached_property
    def neg_t(self):
        d = (-self.digits) % self.p
        return (d @ self.weights).astype(np.int64)

    @cached_property
    def inv_t(self):
        N = self.size
        inv = np.zeros(N, dtype=np.int64)
        nz = np.arange(1, N)
        inv[nz] = self.exp[(-self.log[nz]) % (N - 1)]
        return inv

    @cached_property
    def sub_t(self):
        return self.add_t[:, self.neg_t]

    # -- scalar operations on encodings ----------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_t[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_t[a, self.neg_t[b]])

    def neg(self, a: int) -> int:
        return int(self.neg_t[a])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.size - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.inv_t[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if n == 0 else 0
        return int(self.exp[(self.log[a] * n) % (self.size - 1)])

    def frob(self, a: int, i: int = 1) -> int:
        """a^(p^i)."""
        return self.pow(a, pow(self.p, i % self.m, self.size - 1) if self.size > 2 else 1)

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def sum(self, items) -> int:
        acc = 0
        for x in items:
            acc = int(self.add_t[acc, x])
        return acc

    # -- vectorised helpers ----------------------------------------------

    def frob_table(self, i: int = 1):
        e = pow(self.p, i % self.m)
        a = np.arange(self.size)
        out = np.zeros(self.size, dtype=np.int64)
        nz = a[1:]
        out[1:] = self.exp[(self.log[nz] * e) % (self.size - 1)]
        return out

    def pow_vec(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros_like(a)
        nz = a != 0
        out[nz] = self.exp[(self.log[a[nz]] * n) % (self.size - 1)]
        if n == 0:
            out[~nz] = 1
        return out

    def vsum(self, arr, axis=0):
        """Field sum along an axis."""
        arr = np.asarray(arr, dtype=np.int64)
        arr = np.moveaxis(arr, axis, 0)
        acc = np.zeros(arr.shape[1:], dtype=np.int64)
        for row in arr:
            acc = self.add_t[acc, row]
        return np.asarray(acc, dtype=np.int64)

    def elements(self):
        return [FieldElement(self, a) for a in range(self.size)]

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx is not self:
                raise CtxMismatch(f"{value.ctx} element given to {self}")
            return value
        value = int(value)
        if not 0 <= value < self.size:
            raise ValueError(f"encoding {value} out of range for {self}")
        return FieldElement(self, value)

    @property
    def gen(self) -> "FieldElement":
        """The class of x modulo the field's modulus."""
        return FieldElement(self, self.p if self.m > 1 else (-self.modulus[0]) % self.p)

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}


@lru_cache(maxsize=None)
def _build_field(p: int, m: int) -> FieldCtx:
    return FieldCtx(p, m, smallest_irreducible(p, m))


def build_field(p: int, m: int, max_bits: int | None = None) -> FieldCtx:
    """The context of F_{p^m} (cached, so equal fields are the same object)."""
    max_bits = _config.MAX_FIELD_BITS if max_bits is None else max_bits
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if m < 1:
        raise DegreeZero(f"extension degree must be >= 1, got {m}")
    if p**m > 2**max_bits:
        raise FieldTooLarge(f"{p}^{m} exceeds the 2^{max_bits} budget")
    return _build_field(p, m)


class FieldElement:
    """An element of a :class:`FieldCtx` (immutable)."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = int(value)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise CtxMismatch(f"{self.ctx} vs {other.ctx}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.ctx.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.sub(o, self.value))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.ctx, self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero in " + repr(self.ctx))
        return FieldElement(self.ctx, self.ctx.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.div(o, self.value))

    def __pow__(self, n: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, n))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.ctx.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.ctx}({self.value})"

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.value))


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Binary operation by name: ``add``, ``sub``, ``mul`` or ``div``."""
    if a.ctx is not b.ctx:
        raise CtxMismatch(f"{a.ctx} vs {b.ctx}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.value == 0:
            raise ZeroDivisionError("division by zero")
        return a * b ** (a.ctx.size - 2)
    raise ValueError(f"unknown operation {op!r}")


def frobenius(a: FieldElement, i: int) -> FieldElement:
    if i < 0:
        raise ValueError("iterate count must be non-negative")
    return FieldElement(a.ctx, a.ctx.frob(a.value, i))


def subfield_membership(a: FieldElement, d: int) -> bool:
    if d < 1 or a.ctx.m % d:
        raise NotADivisor(f"{d} does not divide {a.ctx.m}")
    return a.ctx.frob(a.value, d) == a.value


def subfield_elements(ctx: FieldCtx, d: int) -> np.ndarray:
    """Encodings of the copy of F_{p^d} inside ctx, ascending."""
    if d < 1 or ctx.m % d:
        raise NotADivisor(f"{d} does not divide {ctx.m}")
    a = np.arange(ctx.size)
    return a[ctx.frob_table(d) == a]


@lru_cache(maxsize=None)
def embedding_map(source: FieldCtx, target: FieldCtx) -> np.ndarray:
    """Array sending source encodings to target encodings.

    The image of the source generator is the smallest root (by encoding) of
    the source modulus in the target.
    """
    if source.p != target.p:
        raise CharMismatch(f"characteristic {source.p} vs {target.p}")
    if target.m % source.m:
        raise NotASubfield(f"F_{source.p}^{source.m} is not a subfield of F_{target.p}^{target.m}")
    if source is target:
        return np.arange(source.size, dtype=np.int64)
    # evaluate the source modulus on every target element (Horner)
    vals = np.zeros(target.size, dtype=np.int64)
    xs = np.arange(target.size)
    for coef in reversed(source.modulus):
        vals = target.add_t[target.mul_t[vals, xs], target.from_int(coef)]
    r = int(np.nonzero(vals == 0)[0][0])
    powers = [1]
    for _ in range(source.m - 1):
        powers.append(target.mul(powers[-1], r))
    out = np.zeros(source.size, dtype=np.int64)
    for a in range(source.size):
        acc = 0
        for i, c in enumerate(source.digits[a]):
            if c:
                acc = target.add(acc, target.mul(int(c), powers[i]))
        out[a] = acc
    return out


def embed(a: FieldElement, target: FieldCtx) -> FieldElement:
    return FieldElement(target, int(embedding_map(a.ctx, target)[a.value]))
