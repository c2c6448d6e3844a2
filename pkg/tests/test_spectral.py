import math

import numpy as np
import pytest

from hypenergy.field import FpSet, make_context
from hypenergy.spectral import (WeightFn, balanced, dft, idft, plancherel_gap,
                                spectrum_lq_norm, unit_roots, wiener_norm)

from helpers import rand_fpset, rng_for


def rand_weight(ctx, rng, real=False):
    if real:
        vals = np.array([rng.uniform(-1, 1) for _ in range(ctx.p)])
    else:
        vals = np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                         for _ in range(ctx.p)])
    return WeightFn(ctx, vals)


def test_dft_delta_and_constant():
    ctx = make_context(11)
    assert np.allclose(dft(WeightFn.delta(ctx, 0)).coeffs, 1.0)
    F = dft(WeightFn.constant(ctx, 1.0)).coeffs
    assert abs(F[0] - 11) < 1e-9
    assert np.abs(F[1:]).max() < 1e-9


def test_parseval_interval():
    ctx = make_context(101)
    f = WeightFn.from_set(FpSet(ctx, range(1, 11)))
    power = float((np.abs(dft(f).coeffs) ** 2).sum())
    assert abs(power - 101 * 10) < 1e-6  # independent direct check of Parseval


def test_spectrum_invariants_random():
    ctx = make_context(53)
    rng = rng_for("spectrum")
    f = rand_weight(ctx, rng, real=True)
    F = dft(f)
    assert abs(F.coeffs[0] - f.values.sum()) <= 1e-9 * max(1.0, abs(f.values.sum()))
    for xi in range(1, 53):
        assert abs(F.coeffs[-xi % 53] - np.conj(F.coeffs[xi])) < 1e-9


def test_inversion_round_trip():
    ctx = make_context(53)
    rng = rng_for("roundtrip")
    for _ in range(5):
        f = rand_weight(ctx, rng)
        back = idft(dft(f))
        assert np.abs(back.values - f.values).max() <= 1e-9 * f.sup()
    d0 = WeightFn.delta(ctx, 0)
    assert np.abs(idft(dft(d0)).values - d0.values).max() < 1e-12


def test_plancherel_convolution():
    rng = rng_for("plancherel")
    for p in (11, 101, 401):
        ctx = make_context(p)
        f = rand_weight(ctx, rng)
        g = rand_weight(ctx, rng)
        assert plancherel_gap(f, g) <= 1e-8 * f.lp(2) * g.lp(2) * p
        # convolution identity: sum_y |(f*g)(y)|^2 = p^{-1} sum |f^|^2 |g^|^2
        conv = np.array([np.dot(f.values, np.roll(g.values[::-1], y + 1))
                         for y in range(p)])
        lhs = float((np.abs(conv) ** 2).sum())
        Fc, Gc = dft(f).coeffs, dft(g).coeffs
        rhs = float((np.abs(Fc) ** 2 * np.abs(Gc) ** 2).sum()) / p
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs))


def test_wiener_norm_examples():
    ctx = make_context(101)
    assert abs(wiener_norm(WeightFn.delta(ctx, 0)) - 1.0) < 1e-9
    assert abs(wiener_norm(WeightFn.constant(ctx, 1.0)) - 1.0) < 1e-9


@pytest.mark.parametrize("p,n", [(101, 10), (401, 25), (1009, 40)])
def test_interval_wiener_log_bound(p, n):
    ctx = make_context(p)
    w = wiener_norm(WeightFn.from_set(FpSet(ctx, range(1, n + 1))))
    assert w <= 32 * math.log2(p)  # documented envelope; true constant ~0.5


@pytest.mark.parametrize("c", [4 / 3, 2, 3])
def test_progression_lq_norms(c):
    # p^{-1} sum |P^|^c <= 32 |P|^{c-1} for progressions, including dilated ones
    ctx = make_context(401)
    for P in (FpSet(ctx, range(1, 21)),
              FpSet(ctx, [(7 * j + 3) % 401 for j in range(15)])):
        val = spectrum_lq_norm(WeightFn.from_set(P), c) ** c
        assert val <= 32 * len(P) ** (c - 1)


def test_norm_chain():
    rng = rng_for("chain")
    ctx = make_context(101)
    for _ in range(10):
        f = rand_weight(ctx, rng)
        w = wiener_norm(f)
        assert f.sup() <= w + 1e-9
        assert w <= f.lp(2) + 1e-9
        assert f.lp(1) <= 101 * w + 1e-9


def test_spectrum_lq_conventions():
    ctx = make_context(101)
    f = WeightFn.delta(ctx, 0)
    assert abs(spectrum_lq_norm(f, 1) - wiener_norm(f)) < 1e-12
    rng = rng_for("lq")
    g = rand_weight(ctx, rng)
    assert abs(spectrum_lq_norm(g, 2) - g.lp(2)) < 1e-9  # Parseval
    with pytest.raises(ValueError):
        spectrum_lq_norm(g, 0.5)


def test_lq43_against_dense_double_sum():
    # independent dense evaluation of the same norm, no shared code path
    p = 101
    ctx = make_context(p)
    f = WeightFn.from_set(FpSet(ctx, range(1, 11)))
    total = 0.0
    for xi in range(p):
        acc = sum(math.e ** 0j * complex(math.cos(-2 * math.pi * xi * x / p),
                                         math.sin(-2 * math.pi * xi * x / p))
                  for x in range(1, 11))
        total += abs(acc) ** (4 / 3)
    expect = (total / p) ** (3 / 4)
    assert abs(spectrum_lq_norm(f, 4 / 3) - expect) < 1e-9


def test_balanced_examples():
    ctx = make_context(5)
    f = balanced(FpSet(ctx, [0, 1]))
    assert np.allclose(f.values[:2].real, 3 / 5)
    assert np.allclose(f.values[2:].real, -2 / 5)
    assert abs(f.values.sum()) < 1e-12
    assert np.abs(balanced(FpSet(ctx, range(5))).values).max() < 1e-12
    assert np.abs(balanced(FpSet(ctx, [])).values).max() < 1e-12


def test_dense_cap_guard():
    with pytest.raises(ValueError, match="cap"):
        dft(WeightFn.delta(make_context(4099), 1))
    with pytest.warns(RuntimeWarning):
        dft(WeightFn.delta(make_context(4099), 1), allow_large=True)


def test_unit_roots_table():
    E = unit_roots(7)
    assert abs(E[0] - 1) < 1e-15
    assert abs(E[3] - np.exp(2j * np.pi * 3 / 7)) < 1e-15
