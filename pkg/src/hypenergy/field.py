"""Exact arithmetic over the prime field Z/pZ.

Foundation layer for everything else: field contexts with precomputed
inverse / discrete-log / power tables, canonical finite subsets, set
algebra (sumsets, product sets, dilates) and integer representation-
function tables r_{A+B}, r_{A-B}, r_{AB}.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

# Membership below this cap uses a length-p bit array; above it, bisection.
BITMASK_MAX_P = 1 << 20


def is_prime(n: int) -> bool:
    """Trial-division primality check; adequate at desk scale."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _find_primitive_root(p: int) -> int:
    # Deterministic smallest-first search so dlog tables are reproducible.
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError(f"no primitive root found for p={p}")


@dataclass(eq=False, repr=False)
class FieldContext:
    """Immutable arena for mod-p computation.

    inv_table[x] = x^{-1} mod p for x != 0 (inv_table[0] is a 0 sentinel),
    exp_table[k] = primitive_root^k, dlog_table[exp_table[k]] = k with
    dlog_table[0] = -1.  All arrays are read-only; share freely.
    """

    p: int
    inv_table: np.ndarray
    primitive_root: int
    dlog_table: np.ndarray
    exp_table: np.ndarray

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 is not invertible mod p")
        return int(self.inv_table[x])

    def dlog(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("dlog of 0 is undefined")
        return int(self.dlog_table[x])

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p})"


@functools.lru_cache(maxsize=None)
def make_context(p: int) -> FieldContext:
    """Build (and cache) the field context for an odd prime p."""
    if not isinstance(p, int) or p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p={p} is not an odd prime")
    inv = np.zeros(p, dtype=np.int64)
    inv[1] = 1
    for x in range(2, p):
        inv[x] = (p - (p // x) * int(inv[p % x])) % p
    g = _find_primitive_root(p)
    exp = np.empty(p - 1, dtype=np.int64)
    cur = 1
    for k in range(p - 1):
        exp[k] = cur
        cur = cur * g % p
    dlog = np.full(p, -1, dtype=np.int64)
    dlog[exp] = np.arange(p - 1)
    for arr in (inv, exp, dlog):
        arr.setflags(write=False)
    return FieldContext(p=p, inv_table=inv, primitive_root=g,
                        dlog_table=dlog, exp_table=exp)


def _same_ctx(A: "FpSet", B: "FpSet") -> FieldContext:
    if A.ctx.p != B.ctx.p:
        raise ValueError(f"mismatched field contexts: p={A.ctx.p} vs p={B.ctx.p}")
    return A.ctx


class FpSet:
    """A finite subset of F_p held as strictly increasing residues."""

    __slots__ = ("ctx", "elems", "_mask")

    def __init__(self, ctx: FieldContext, elems: Iterable[int]):
        p = ctx.p
        self.ctx = ctx
        self.elems = tuple(sorted({int(e) % p for e in elems}))
        if p <= BITMASK_MAX_P:
            mask = np.zeros(p, dtype=bool)
            if self.elems:
                mask[np.fromiter(self.elems, dtype=np.int64)] = True
            self._mask = mask
        else:
            self._mask = None

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x: int) -> bool:
        x = int(x) % self.ctx.p
        if self._mask is not None:
            return bool(self._mask[x])
        import bisect
        i = bisect.bisect_left(self.elems, x)
        return i < len(self.elems) and self.elems[i] == x

    def __eq__(self, other) -> bool:
        return (isinstance(other, FpSet) and self.ctx.p == other.ctx.p
                and self.elems == other.elems)

    def __hash__(self):
        return hash((self.ctx.p, self.elems))

    def __repr__(self) -> str:
        body = ",".join(map(str, self.elems[:8]))
        tail = ",..." if len(self.elems) > 8 else ""
        return f"FpSet(p={self.ctx.p}, {{{body}{tail}}})"

    def as_array(self) -> np.ndarray:
        return np.fromiter(self.elems, dtype=np.int64, count=len(self.elems))

    def indicator(self) -> np.ndarray:
        """Length-p 0/1 integer vector."""
        ind = np.zeros(self.ctx.p, dtype=np.int64)
        if self.elems:
            ind[self.as_array()] = 1
        return ind


def sumset(A: FpSet, B: FpSet) -> FpSet:
    ctx = _same_ctx(A, B)
    if not A.elems or not B.elems:
        return FpSet(ctx, ())
    vals = (A.as_array()[:, None] + B.as_array()[None, :]).ravel() % ctx.p
    return FpSet(ctx, np.unique(vals))


def difference_set(A: FpSet, B: FpSet) -> FpSet:
    ctx = _same_ctx(A, B)
    if not A.elems or not B.elems:
        return FpSet(ctx, ())
    vals = (A.as_array()[:, None] - B.as_array()[None, :]).ravel() % ctx.p
    return FpSet(ctx, np.unique(vals))


def product_set(A: FpSet, B: FpSet) -> FpSet:
    ctx = _same_ctx(A, B)
    if not A.elems or not B.elems:
        return FpSet(ctx, ())
    vals = (A.as_array()[:, None] * B.as_array()[None, :]).ravel() % ctx.p
    return FpSet(ctx, np.unique(vals))


def quotient_set(A: FpSet, B: FpSet) -> FpSet:
    """A/B with b = 0 dropped, as in the definition of the quotient set."""
    ctx = _same_ctx(A, B)
    b = B.as_array()
    b = b[b != 0]
    if not A.elems or len(b) == 0:
        return FpSet(ctx, ())
    binv = ctx.inv_table[b]
    vals = (A.as_array()[:, None] * binv[None, :]).ravel() % ctx.p
    return FpSet(ctx, np.unique(vals))


def dilate(A: FpSet, m: int) -> FpSet:
    """The set m*A = {m*a}; a bijection of A whenever m != 0."""
    ctx = A.ctx
    return FpSet(ctx, (int(m) * A.as_array()) % ctx.p)


def translate(A: FpSet, t: int) -> FpSet:
    ctx = A.ctx
    return FpSet(ctx, (A.as_array() + int(t)) % ctx.p)


@dataclass(eq=False)
class RepTable:
    """Integer representation counts r(x) for x in F_p."""

    ctx: FieldContext
    values: np.ndarray

    def total(self) -> int:
        return int(self.values.sum())

    def __getitem__(self, x: int) -> int:
        return int(self.values[int(x) % self.ctx.p])


def rep_additive(A: FpSet, B: FpSet, sign: str = "+") -> RepTable:
    """r_{A+B} or r_{A-B}: values[x] = #{(a,b) : a +- b = x mod p}."""
    ctx = _same_ctx(A, B)
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    if not A.elems or not B.elems:
        return RepTable(ctx, np.zeros(ctx.p, dtype=np.int64))
    a = A.as_array()[:, None]
    b = B.as_array()[None, :]
    vals = (a + b) % ctx.p if sign == "+" else (a - b) % ctx.p
    return RepTable(ctx, np.bincount(vals.ravel(), minlength=ctx.p).astype(np.int64))


def rep_multiplicative(A: FpSet, B: FpSet) -> RepTable:
    """r_{AB}: values[x] = #{(a,b) : a*b = x mod p}.

    Pairs touching 0 all land at x = 0; the nonzero part is reduced through
    the dlog table to an additive convolution over Z/(p-1).
    """
    ctx = _same_ctx(A, B)
    p = ctx.p
    a = A.as_array()
    b = B.as_array()
    an = a[a != 0]
    bn = b[b != 0]
    values = np.zeros(p, dtype=np.int64)
    values[0] = len(a) * len(b) - len(an) * len(bn)
    if len(an) and len(bn):
        u = np.bincount(ctx.dlog_table[an], minlength=p - 1)
        v = np.bincount(ctx.dlog_table[bn], minlength=p - 1)
        values[ctx.exp_table] = cyclic_convolve(u, v)
    return RepTable(ctx, values)


def cyclic_convolve(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Exact integer circular convolution of two equal-length vectors."""
    u = np.asarray(u)
    v = np.asarray(v)
    if len(u) != len(v):
        raise ValueError("cyclic_convolve needs equal lengths")
    n = len(u)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    # Each output entry is at most (sum u)*(max v); the lax total-mass bound
    # below decides when int64 is provably safe.
    if int(u.sum()) * int(v.sum()) > 2**62:
        w = np.convolve(u.astype(object), v.astype(object))
        out = w[:n]
        if n > 1:
            out[: n - 1] += w[n:]
        return out
    w = np.convolve(u.astype(np.int64), v.astype(np.int64))
    out = w[:n].copy()
    if n > 1:
        out[: n - 1] += w[n:]
    return out


def is_unit_interval(A: FpSet) -> bool:
    """True when A is an arithmetic progression with difference 1 mod p
    (a cyclic interval)."""
    n = len(A)
    if n == 0:
        return False
    if n == A.ctx.p:
        return True
    p = A.ctx.p
    exits = sum(1 for x in A.elems if (x + 1) % p not in A)
    return exits == 1
