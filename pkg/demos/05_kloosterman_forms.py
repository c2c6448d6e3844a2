"""Bilinear forms of Kloosterman sums and the p^{3/2} barrier.

For weights supported on sqrt(p)-sized sets, both elementary bounds
(p l2*l2 and 2 sqrt(p) l1*l1) land at p^{3/2}; the scan shows what the
true bilinear mass does on interval weights, expressed as the empirical
saving delta with |S| = l2-mass * p^{1-delta}.
"""

import math

from hypenergy import FpSet, WeightFn, bilinear_form, make_context
from hypenergy.kloosterman import (bound_basic, bound_thm_NM,
                                   kloosterman_value, saving_row)

print("=== single sums and the Weil bound ===")
ctx = make_context(101)
worst = max(abs(kloosterman_value(ctx, n, 1)) for n in range(1, 101))
print(f"max |K(n,1)| over F_101^* = {worst:.4f} <= 2 sqrt(p) = {2 * math.sqrt(101):.4f}")

print()
print("=== the barrier at sqrt(p)-sized supports ===")
for p in (101, 401, 1009):
    ctxp = make_context(p)
    n = int(math.isqrt(p))
    ind = WeightFn.from_set(FpSet(ctxp, range(1, n + 1)))
    rep = bound_basic(ind, ind)
    s = abs(bilinear_form(ind, ind, "spectral"))
    print(f"p={p:5d} N={n:3d}: |S| = {s:10.2f}   both bounds ~ p^1.5 = "
          f"{p ** 1.5:10.1f}   |S|/p^1.5 = {s / p ** 1.5:.4f}")

print()
print("=== progression-support bounds and their saving exponents ===")
for p in (401, 1009):
    ctxp = make_context(p)
    n = int(math.isqrt(p))
    alpha = WeightFn.from_set(FpSet(ctxp, range(1, n + 1)))
    rep = bound_thm_NM(alpha, alpha, n, n, 0, 0)
    print(f"p={p:5d} N=M={n:3d}: |S| = {float(rep.lhs):9.2f}  rhs = {rep.rhs:12.1f}  "
          f"saving exponent = {rep.extra['saving_exponent']:.4f} (< 1.5)")

print()
print("=== empirical delta across the prime grid, interval family ===")
print(f"{'p':>6}{'N':>5}{'|S|':>11}{'l2 mass':>10}{'delta':>9}")
for p in (101, 401, 1009, 2003):
    ctxp = make_context(p)
    n = int(math.isqrt(p))
    alpha = WeightFn.from_set(FpSet(ctxp, range(1, n + 1)))
    row = saving_row(ctxp, alpha, alpha)
    print(f"{p:>6}{n:>5}{row['S_abs']:>11.2f}{row['l2_mass']:>10.2f}"
          f"{row['delta']:>9.4f}")
