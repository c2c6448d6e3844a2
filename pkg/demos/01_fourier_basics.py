"""Tour of the Fourier layer: transforms, Plancherel, Wiener norms.

Walks through the basic identities on a small prime and shows why
intervals are spectrally special: their Wiener norm grows like log p
while a random set of the same size sits near sqrt(|A|).
"""

import math
import random

import numpy as np

from hypenergy import FpSet, WeightFn, dft, idft, make_context, wiener_norm
from hypenergy.spectral import plancherel_gap, spectrum_lq_norm

p = 101
ctx = make_context(p)
rng = random.Random(0)

print(f"=== F_{p}: transforms and identities ===")
delta = WeightFn.delta(ctx, 0)
print("dft(delta_0) is identically 1:", np.allclose(dft(delta).coeffs, 1.0))

f = WeightFn(ctx, np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                            for _ in range(p)]))
g = WeightFn(ctx, np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                            for _ in range(p)]))
print(f"Plancherel defect on random f, g: {plancherel_gap(f, g):.2e}")
back = idft(dft(f))
print(f"inversion round-trip sup error:  {np.abs(back.values - f.values).max():.2e}")

print()
print("=== Wiener norms: intervals vs random sets ===")
for n in (10, 20, 40):
    interval = FpSet(ctx, range(1, n + 1))
    scatter = FpSet(ctx, rng.sample(range(p), n))
    wi = wiener_norm(WeightFn.from_set(interval))
    wr = wiener_norm(WeightFn.from_set(scatter))
    print(f"|A| = {n:3d}   interval: {wi:6.3f}  (log2 p = {math.log2(p):.2f})"
          f"   random: {wr:6.3f}  (sqrt|A| = {math.sqrt(n):.2f})")

print()
print("=== Spectrum L^q norms of an interval, q in {4/3, 2, 3} ===")
P = FpSet(ctx, range(1, 21))
fP = WeightFn.from_set(P)
for q in (4 / 3, 2.0, 3.0):
    val = spectrum_lq_norm(fP, q)
    print(f"q = {q:.3g}: norm = {val:8.4f}   norm^q / |P|^(q-1) = "
          f"{val ** q / len(P) ** (q - 1):6.3f}")
print("(the q = 2 row reproduces sqrt|P| by Parseval)")
