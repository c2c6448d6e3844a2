"""Kloosterman sums K(n,m) and their bilinear forms S(alpha, beta).

K(n,m) = sum_{x != 0} e(nx + m x^{-1}) is real for odd p and reduces to
K(nm, 1) whenever (n,m) != (0,0); a length-p table of K(t,1) therefore
covers the whole grid, with K(0,0) = p-1 the single special cell.

S(alpha,beta) = sum_{n,m} alpha(n) beta(m) K(n,m) is evaluated two ways:
directly through the table, and spectrally as
sum_{x != 0} alpha^(x) beta^(x^{-1}); the direct route is the arbiter.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .field import FieldContext, FpSet
from .reports import BoundReport
from .spectral import WeightFn, dft, spectrum_lq_norm, unit_roots, wiener_norm

_TABLES: dict[int, np.ndarray] = {}

IMAG_TOL = 1e-9


def kloosterman_sum(ctx: FieldContext, n: int, m: int) -> complex:
    """Direct O(p) evaluation of K(n,m)."""
    p = ctx.p
    n %= p
    m %= p
    xs = np.arange(1, p, dtype=np.int64)
    expo = (n * xs + m * ctx.inv_table[xs]) % p
    return complex(unit_roots(p)[expo].sum())


def kloosterman_table(ctx: FieldContext) -> np.ndarray:
    """Real length-p table T[t] = K(t,1); built once per prime, then cached.

    T[0] = K(0,1) = -1.  Verifies on construction that every value is real
    to IMAG_TOL and that the Weil bound 2 sqrt(p) holds for t != 0.
    """
    p = ctx.p
    tab = _TABLES.get(p)
    if tab is not None:
        return tab
    xs = np.arange(1, p, dtype=np.int64)
    invx = ctx.inv_table[xs]
    E = unit_roots(p)
    out = np.empty(p, dtype=np.float64)
    block = max(1, (1 << 21) // p)
    ts = np.arange(p, dtype=np.int64)
    for s in range(0, p, block):
        chunk = ts[s:s + block]
        expo = (chunk[:, None] * xs[None, :] + invx[None, :]) % p
        vals = E[expo].sum(axis=1)
        if np.abs(vals.imag).max() > IMAG_TOL:
            raise AssertionError("Kloosterman values must be real for odd p")
        out[s:s + block] = vals.real
    weil = 2 * math.sqrt(p)
    if np.abs(out[1:]).max() > weil + 1e-9:
        raise AssertionError("Weil bound violated; table build is broken")
    out.setflags(write=False)
    _TABLES[p] = out
    return out


def kloosterman_value(ctx: FieldContext, n: int, m: int) -> float:
    """Table-backed K(n,m) via K(n,m) = K(nm,1); K(0,0) = p-1."""
    p = ctx.p
    n %= p
    m %= p
    if n == 0 and m == 0:
        return float(p - 1)
    return float(kloosterman_table(ctx)[n * m % p])


def bilinear_form(alpha: WeightFn, beta: WeightFn, method: str = "direct") -> complex:
    """S(alpha,beta) = sum_{n,m} alpha(n) beta(m) K(n,m)."""
    ctx = alpha.ctx
    if ctx.p != beta.ctx.p:
        raise ValueError("mismatched field contexts")
    p = ctx.p
    if method == "direct":
        tab = kloosterman_table(ctx)
        sa = alpha.support
        sb = beta.support
        if len(sa) == 0 or len(sb) == 0:
            return 0j
        av = alpha.values[sa]
        bv = beta.values[sb]
        kv = tab[(sa[:, None] * sb[None, :]) % p]
        total = complex(np.einsum("i,j,ij->", av, bv, kv))
        if 0 in sa and 0 in sb:
            # the (0,0) cell is K(0,0) = p-1, not the table's K(0,1) = -1
            total += alpha.values[0] * beta.values[0] * p
        return total
    if method == "spectral":
        fa = dft(alpha).coeffs
        fb = dft(beta).coeffs
        xs = np.arange(1, p, dtype=np.int64)
        return complex((fa[xs] * fb[ctx.inv_table[xs]]).sum())
    raise ValueError(f"unknown method {method!r}")


def bound_basic(alpha: WeightFn, beta: WeightFn) -> BoundReport:
    """|S| against p ||a||_2 ||b||_2 and 2 sqrt(p) ||a||_1 ||b||_1.

    These two carry no hidden constants.  The second presumes the Weil
    range nm != 0; when both supports load 0 (where K(0,0) = p-1 breaks
    it), it is reported but not asserted, flagged as supports_hit_zero.
    """
    ctx = alpha.ctx
    p = ctx.p
    S = bilinear_form(alpha, beta, "direct")
    lhs = abs(S)
    rhs1 = p * alpha.lp(2) * beta.lp(2)
    rhs2 = 2 * math.sqrt(p) * alpha.lp(1) * beta.lp(1)
    hit_zero = (0 in alpha.support) and (0 in beta.support)
    ok1 = lhs <= rhs1 * (1 + 1e-9)
    ok2 = lhs <= rhs2 * (1 + 1e-9)
    passed = ok1 and (ok2 or hit_zero)
    return BoundReport(name="kloosterman-basic", lhs=lhs, main_term=0,
                       rhs_terms={"p_l2l2": rhs1, "weil_l1l1": rhs2},
                       envelope=1.0, passed=passed,
                       ratio=lhs / min(rhs1, rhs2) if min(rhs1, rhs2) else math.inf,
                       extra={"S": S, "holds_l2": ok1, "holds_weil": ok2,
                              "supports_hit_zero": hit_zero})


def _interval_points(ctx: FieldContext, N: int, shift: int) -> set[int]:
    return {(shift + j) % ctx.p for j in range(1, N + 1)}


def bound_thm_NM(alpha: WeightFn, beta: WeightFn, N: int, M: int,
                 t1: int = 0, t2: int = 0,
                 envelope: Optional[float] = None) -> BoundReport:
    """|S(alpha,beta)| for weights on [N]+t1, [M]+t2 against the two
    progression bounds.

    rhs1 = ||b||_2 ( ||a^||_{4/3} (NM)^{7/48} p^{23/24}
                     + (||a||_2 ||a||_1)^{1/2} p^{3/4} + ||a||_W p )
    rhs2 (under M^2 N^2 ||a^||_{4/3}^{12} < p ||a||_2^{12}) =
           ||b||_2 ( ||a^||_{4/3}^{6/7} ||a||_2^{1/7} (NM)^{1/7} p^{13/14}
                     + (||a||_2 ||a||_1)^{1/2} p^{3/4} + ||a^||_{4/3} p^{13/12} )

    Asserts |S| <= envelope * min(applicable rhs) and reports the saving
    exponent log_p(|S| / (||a||_2 ||b||_2)).
    """
    ctx = alpha.ctx
    p = ctx.p
    if envelope is None:
        envelope = 1024.0 * math.log2(p) ** 3
    supp_a = set(int(x) for x in alpha.support)
    supp_b = set(int(x) for x in beta.support)
    if not supp_a <= _interval_points(ctx, N, t1):
        raise ValueError("support of alpha leaves [N] + t1")
    if not supp_b <= _interval_points(ctx, M, t2):
        raise ValueError("support of beta leaves [M] + t2")
    S = bilinear_form(alpha, beta, "spectral")
    lhs = abs(S)
    a2 = alpha.lp(2)
    a1 = alpha.lp(1)
    aW = wiener_norm(alpha)
    aL43 = spectrum_lq_norm(alpha, 4 / 3)
    b2 = beta.lp(2)
    terms1 = {
        "L43_NM748_p2324": aL43 * (N * M) ** (7 / 48) * p ** (23 / 24),
        "sqrt_l2l1_p34": math.sqrt(a2 * a1) * p ** 0.75,
        "wiener_p": aW * p,
    }
    rhs1 = b2 * sum(terms1.values())
    premise = (M ** 2) * (N ** 2) * aL43 ** 12 < p * a2 ** 12
    rhs_terms = {"progression_bound": rhs1}
    rhs_eff = rhs1
    rhs2 = None
    if premise:
        terms2 = {
            "L43_67_NM17_p1314": aL43 ** (6 / 7) * a2 ** (1 / 7) * (N * M) ** (1 / 7) * p ** (13 / 14),
            "sqrt_l2l1_p34": math.sqrt(a2 * a1) * p ** 0.75,
            "L43_p1312": aL43 * p ** (13 / 12),
        }
        rhs2 = b2 * sum(terms2.values())
        if rhs2 < rhs_eff:
            rhs_eff = rhs2
            rhs_terms = {"refined_bound": rhs2}
    denom = a2 * b2
    saving = math.log(lhs / denom, p) if lhs > 0 and denom > 0 else -math.inf
    return BoundReport(name="kloosterman-NM", lhs=lhs, main_term=0,
                       rhs_terms=rhs_terms, envelope=envelope,
                       passed=lhs <= envelope * rhs_eff,
                       ratio=lhs / rhs_eff if rhs_eff else math.inf,
                       extra={"saving_exponent": saving, "premise_second": premise,
                              "rhs_first": rhs1, "rhs_second": rhs2,
                              "N": N, "M": M, "t1": t1, "t2": t2, "S": S})


def saving_exponent_scan(instances) -> list[dict]:
    """Scan rows for (ctx, alpha, beta, N, M) instances.

    Each row reports p, N, M, |S|, the l2 mass and the empirical delta in
    |S| = ||a||_2 ||b||_2 p^{1-delta}; nothing is asserted beyond the
    trivial |S| <= p ||a||_2 ||b||_2.
    """
    rows = []
    for ctx, alpha, beta, N, M in instances:
        row = saving_row(ctx, alpha, beta)
        row["N"] = N
        row["M"] = M
        rows.append(row)
    return rows


def saving_row(ctx: FieldContext, alpha: WeightFn, beta: WeightFn) -> dict:
    """One scan row: |S|, the l2 mass, and the empirical delta with
    |S| = ||a||_2 ||b||_2 p^{1-delta}."""
    p = ctx.p
    S = bilinear_form(alpha, beta, "spectral")
    lhs = abs(S)
    denom = alpha.lp(2) * beta.lp(2)
    if lhs == 0 or denom == 0:
        delta = math.inf
        degenerate = True
    else:
        delta = 1 - math.log(lhs / denom, p)
        degenerate = len(alpha.support) <= 1 or len(beta.support) <= 1
    return {"p": p, "S_abs": lhs, "l2_mass": denom, "delta": delta,
            "degenerate": degenerate,
            "trivial_ok": lhs <= p * denom * (1 + 1e-9)}
