"""Integer-mode checks: free unipotent pairs, word-energy caps, and the
shift-inverse profile.

Over Z the unipotent pair u_s, u*_t with |s|,|t| >= 2 satisfies no
relation, which pins T_{2k} of the matrix family to a clean power of the
set sizes.  The profile at the end measures how shifting a set interacts
with elementwise inversion in F_p.
"""

from hypenergy import FpSet, make_context
from hypenergy.incidence import (bound_asym_Z, bound_prop_Re, rho_bound,
                                 shift_inverse_profile)
from hypenergy.sl2 import free_group_check, t_2k_integer_mode

print("=== exhaustive word check for the pair u_2, u*_2 ===")
rep = free_group_check(2, 2, max_len=6, exp_cap=3)
print(f"words checked: {rep.extra['words_checked']}, identities found: "
      f"{int(rep.lhs)}  -> free: {rep.passed}")

print()
print("=== T_2k of integer matrix families vs the free-word cap ===")
for B, C, lam, k in ((list(range(1, 9)), list(range(1, 9)), 1, 1),
                     (list(range(1, 6)), list(range(1, 6)), 2, 2)):
    rep = t_2k_integer_mode(B, C, lam, k)
    print(f"|B|={len(B)} |C|={len(C)} lam={lam} k={k}: T_{2 * k} = {rep.lhs:>12} "
          f"<= {rep.extra['exact_bound']:>20}  ratio = {rep.ratio:.2e}")

print()
print("=== asymmetric counts over Z ===")
A = list(range(-15, 16))
D = list(range(-20, 21))
B = [2 * j for j in range(1, 7)]
C = list(range(1, 7))
rho, k_star, comp = rho_bound(B, C)
print(f"rho(B,C) = {rho:.4f} at k = {k_star} (trivial-energy cap {comp:.4f})")
for lam in (12, 60):
    rep = bound_asym_Z(A, B, C, D, lam)
    print(f"lam={lam:3d}: count = {rep.lhs:4}  rhs = {rep.rhs:8.1f}  "
          f"ratio = {rep.ratio:.4f}")
rep = bound_prop_Re(A, D, 2, 6, lam=12)
print(f"diagonal family, omega=2, N=6: count = {rep.lhs}, rhs = {rep.rhs:.1f}")

print()
print("=== shift-inverse intersections in F_101 ===")
ctx = make_context(101)
Aset = FpSet(ctx, range(1, 21))
profile, best = shift_inverse_profile(Aset, 8)
for i, cnt in profile:
    marker = "  <- min" if i == best else ""
    print(f"i = {i:2d}: |(A+i) cap (A+i)^-1| = {cnt}{marker}")
