"""Counting solutions of (a+b)(c+d) = lambda and watching the main term.

The count concentrates at |A||B||C||D|/p; what the library measures is
how far specific families deviate and how the deviation compares to the
quarter-power bounds.  The same count is recomputed as an orbit sum of
the matrix family acting on the projective line, an exact cross-check.
"""

import random

from hypenergy import FpSet, count_hyperbola, deviation, make_context
from hypenergy.incidence import bound_thm1, bound_thm_hyp_full
from hypenergy.sl2 import action_sum, g_lambda_set, proj_indicator

p = 401
ctx = make_context(p)
rng = random.Random(4)
lam = 17

print(f"=== random vs interval families at p = {p}, lambda = {lam} ===")
print(f"{'family':<16}{'count':>8}{'main':>10}{'deviation':>12}{'thm-ratio':>11}")
for label, mk in (
        ("random[20]", lambda: [FpSet(ctx, rng.sample(range(p), 20)) for _ in range(4)]),
        ("interval[20]", lambda: [FpSet(ctx, range(30, 50))] * 4),
        ("interval[60]", lambda: [FpSet(ctx, range(100, 160))] * 4)):
    A, B, C, D = mk()
    cnt = count_hyperbola(A, B, C, D, lam)
    dev = deviation(A, B, C, D, lam)
    rep = bound_thm1(A, B, C, D, lam)
    print(f"{label:<16}{cnt:>8}{float(cnt - dev):>10.1f}{float(dev):>12.1f}"
          f"{rep.ratio:>11.4f}")

print()
print("=== energy-aware branch can be sharper when B, C are structured ===")
B = FpSet(ctx, range(1, 31))
C = FpSet(ctx, range(51, 81))
A = FpSet(ctx, rng.sample(range(p), 25))
D = FpSet(ctx, rng.sample(range(p), 25))
rep = bound_thm_hyp_full(A, B, C, D, lam)
print(f"branch 1 (uses E+(B), E+(C)) : {rep.extra['branch1']:12.1f}")
print(f"branch 2 (uses E+(B,C))      : {rep.extra['branch2']:12.1f}")
print(f"deviation                    : {float(rep.deviation):12.1f}")

print()
print("=== the same count as an orbit sum on P^1 ===")
small = make_context(53)
sets = [FpSet(small, rng.sample(range(53), 7)) for _ in range(4)]
A, B, C, D = sets
cnt = count_hyperbola(A, B, C, D, 9)
G = g_lambda_set(FpSet(small, ((-b) % 53 for b in B)), C, 9)
f1 = proj_indicator(small, ((-d) % 53 for d in D))
f2 = proj_indicator(small, A.elems)
orbit = action_sum(small, G, f1, f2)
print(f"convolution count = {cnt}, orbit sum = {orbit}, equal: {cnt == orbit}")
