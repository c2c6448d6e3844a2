"""Discrete Fourier analysis on F_p by direct summation.

Transforms use f^(xi) = sum_x f(x) e(-xi*x) with e(t) = exp(2*pi*i*t/p).
Exponents are reduced mod p before hitting a precomputed root-of-unity
table, so the usual identities (Plancherel, inversion) hold to ~1e-12
relative even at the size cap.  Norm conventions: ||f||_q is the plain
counting-measure norm on the physical side, while spectrum norms carry
the normalized measure p^{-1}, so the L^1 spectrum norm is the Wiener
norm.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Mapping

import numpy as np

from .field import FieldContext, FpSet

# Direct summation is quadratic; above this cap require an explicit opt-in.
DENSE_P_CAP = 4096

SUPPORT_TOL = 1e-12

_ROOTS: dict[int, np.ndarray] = {}


def unit_roots(p: int) -> np.ndarray:
    """Cached table E[j] = exp(2*pi*i*j/p), j in [0, p)."""
    tab = _ROOTS.get(p)
    if tab is None:
        tab = np.exp(2j * np.pi * np.arange(p) / p)
        tab.setflags(write=False)
        _ROOTS[p] = tab
    return tab


class WeightFn:
    """A complex-valued function on F_p with cached support."""

    __slots__ = ("ctx", "values", "_support")

    def __init__(self, ctx: FieldContext, values):
        vals = np.asarray(values, dtype=np.complex128)
        if vals.shape != (ctx.p,):
            raise ValueError(f"values must have length p={ctx.p}")
        self.ctx = ctx
        self.values = vals
        self._support = None

    @classmethod
    def from_set(cls, A: FpSet) -> "WeightFn":
        return cls(A.ctx, A.indicator().astype(np.complex128))

    @classmethod
    def delta(cls, ctx: FieldContext, x: int, weight: complex = 1.0) -> "WeightFn":
        vals = np.zeros(ctx.p, dtype=np.complex128)
        vals[int(x) % ctx.p] = weight
        return cls(ctx, vals)

    @classmethod
    def constant(cls, ctx: FieldContext, c: complex = 1.0) -> "WeightFn":
        return cls(ctx, np.full(ctx.p, c, dtype=np.complex128))

    @classmethod
    def from_pairs(cls, ctx: FieldContext, pairs: Mapping[int, complex]) -> "WeightFn":
        vals = np.zeros(ctx.p, dtype=np.complex128)
        for x, w in pairs.items():
            vals[int(x) % ctx.p] += w
        return cls(ctx, vals)

    @property
    def support(self) -> np.ndarray:
        if self._support is None:
            self._support = np.nonzero(np.abs(self.values) > SUPPORT_TOL)[0]
        return self._support

    def lp(self, q: float) -> float:
        """Counting-measure norm (sum_x |f(x)|^q)^{1/q}."""
        if q < 1:
            raise ValueError("q must be >= 1")
        return float((np.abs(self.values) ** q).sum() ** (1.0 / q))

    def sup(self) -> float:
        return float(np.abs(self.values).max()) if self.ctx.p else 0.0

    def is_real(self) -> bool:
        return bool(np.abs(self.values.imag).max() <= SUPPORT_TOL)

    def __mul__(self, other: "WeightFn") -> "WeightFn":
        if self.ctx.p != other.ctx.p:
            raise ValueError("mismatched field contexts")
        return WeightFn(self.ctx, self.values * other.values)


class Spectrum:
    """Fourier coefficients f^(xi), xi in [0, p)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs):
        arr = np.asarray(coeffs, dtype=np.complex128)
        if arr.shape != (ctx.p,):
            raise ValueError(f"coeffs must have length p={ctx.p}")
        self.ctx = ctx
        self.coeffs = arr


def _check_size(p: int, allow_large: bool) -> None:
    if p > DENSE_P_CAP:
        if not allow_large:
            raise ValueError(
                f"p={p} exceeds the direct-summation cap {DENSE_P_CAP}; "
                "pass allow_large=True to force it")
        warnings.warn(f"direct transform at p={p} is O(p^2); this may be slow",
                      RuntimeWarning, stacklevel=3)


def dft(f: WeightFn, allow_large: bool = False) -> Spectrum:
    """f^(xi) = sum_x f(x) e(-xi*x); O(p*|supp f|) direct summation."""
    ctx = f.ctx
    p = ctx.p
    _check_size(p, allow_large)
    idx = f.support
    coeffs = np.zeros(p, dtype=np.complex128)
    if len(idx) == 0:
        return Spectrum(ctx, coeffs)
    vals = f.values[idx]
    E = unit_roots(p)
    xis = np.arange(p, dtype=np.int64)
    block = max(1, (1 << 22) // len(idx))
    for s in range(0, p, block):
        chunk = xis[s:s + block]
        expo = (-(chunk[:, None] * idx[None, :])) % p
        coeffs[s:s + block] = (E[expo] * vals[None, :]).sum(axis=1)
    return Spectrum(ctx, coeffs)


def idft(F: Spectrum, allow_large: bool = False) -> WeightFn:
    """Inversion: f(x) = p^{-1} sum_xi F(xi) e(xi*x); dense summation."""
    ctx = F.ctx
    p = ctx.p
    _check_size(p, allow_large)
    E = unit_roots(p)
    xis = np.arange(p, dtype=np.int64)
    vals = np.empty(p, dtype=np.complex128)
    block = max(1, (1 << 22) // p)
    for s in range(0, p, block):
        chunk = xis[s:s + block]
        expo = (chunk[:, None] * xis[None, :]) % p
        vals[s:s + block] = (E[expo] * F.coeffs[None, :]).sum(axis=1)
    return WeightFn(ctx, vals / p)


def wiener_norm(f: WeightFn, allow_large: bool = False) -> float:
    """||f||_W = p^{-1} sum_xi |f^(xi)|."""
    return float(np.abs(dft(f, allow_large).coeffs).sum() / f.ctx.p)


def spectrum_lq_norm(f: WeightFn, q: float, allow_large: bool = False) -> float:
    """(p^{-1} sum_xi |f^(xi)|^q)^{1/q}; q=1 reproduces the Wiener norm."""
    if q < 1:
        raise ValueError("q must be >= 1")
    coeffs = dft(f, allow_large).coeffs
    return float(((np.abs(coeffs) ** q).sum() / f.ctx.p) ** (1.0 / q))


def balanced(A: FpSet) -> WeightFn:
    """Balanced function f_A(x) = A(x) - |A|/p; sums to 0 exactly.

    The density is handled as an exact rational and only the final values
    are projected to floats.
    """
    ctx = A.ctx
    dens = Fraction(len(A), ctx.p)
    assert len(A) - ctx.p * dens == 0
    vals = np.full(ctx.p, -float(dens), dtype=np.complex128)
    if A.elems:
        vals[A.as_array()] += 1.0
    return WeightFn(ctx, vals)


def plancherel_gap(f: WeightFn, g: WeightFn) -> float:
    """|<f,g> - p^{-1} <f^,g^>|, the defect in the Plancherel identity."""
    lhs = np.vdot(g.values, f.values)  # sum f * conj(g)
    Fc = dft(f).coeffs
    Gc = dft(g).coeffs
    rhs = np.vdot(Gc, Fc) / f.ctx.p
    return float(abs(lhs - rhs))
