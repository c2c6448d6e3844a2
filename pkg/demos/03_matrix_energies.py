"""Energies of the two-parameter matrix family G_lambda(A,B).

The family {u_a v_b} linearises the hyperbola equation, and its
alternating product energies collapse to ordinary additive energies of
A and B: T_2 exactly, T_3 up to the mixed difference-product count.
The trace-formula check ties T_k to an operator power in a fully
enumerated ambient group.
"""

import random

from hypenergy import (FpSet, additive_energy, d2_quantity, e_plus_k,
                       g_lambda_set, make_context)
from hypenergy.sl2 import (MatSet, e_rk_group, enumerate_sl2, t_k_group,
                           trace_formula_check)

p = 53
ctx = make_context(p)
rng = random.Random(3)

A = FpSet(ctx, rng.sample(range(p), 9))
B = FpSet(ctx, rng.sample(range(p), 7))
lam = 5
G = g_lambda_set(A, B, lam)
print(f"=== G_{lam}(A,B) in SL-type matrices over F_{p}, |G| = {len(G)} ===")

t2 = t_k_group(G, 2)
ident = (len(A) ** 2 * (additive_energy(B) - len(B) ** 2)
         + len(B) ** 2 * additive_energy(A))
print(f"T2(G) = {t2}")
print(f"|A|^2 (E+(B) - |B|^2) + |B|^2 E+(A) = {ident}   equal: {t2 == ident}")

for k in (2, 3):
    erk = e_rk_group(G, k)
    rhs = (len(A) ** 2 * (e_plus_k(B, k) - len(B) ** k)
           + len(B) ** k * e_plus_k(A, k))
    print(f"E^R_{k}(G) = {erk}  closed form = {rhs}  equal: {erk == rhs}")

t3 = t_k_group(G, 3)
cap = len(A) * len(B) * d2_quantity(A, B) + len(A) ** 4 * len(B) ** 4
print(f"T3(G) = {t3} <= |A||B| d2(A,B) + |A|^4|B|^4 = {cap}: {t3 <= cap}")
print(f"monotonicity T3 <= |G|^2 T2: {t3} <= {len(G) ** 2 * t2}")

print()
print("=== trace formula in the fully enumerated SL_2(F_3) ===")
group = enumerate_sl2(3)
Gs = MatSet(rng.sample(group, 6))
for k in (2, 3):
    rep = trace_formula_check(Gs, k)
    print(f"k={k}: T_k(G) = {rep.lhs}, trace(T^k)/|Gr| = "
          f"{rep.extra['trace']}/{rep.extra['group_order']}   exact: {rep.passed}")
