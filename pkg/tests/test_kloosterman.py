import cmath
import math

import numpy as np
import pytest

from hypenergy.field import FpSet, make_context
from hypenergy.kloosterman import (bilinear_form, bound_basic, bound_thm_NM,
                                   kloosterman_sum, kloosterman_table,
                                   kloosterman_value, saving_row)
from hypenergy.spectral import WeightFn

from helpers import rng_for


def test_kloosterman_sum_examples():
    ctx = make_context(101)
    assert kloosterman_sum(ctx, 0, 0) == pytest.approx(100)
    assert kloosterman_sum(ctx, 1, 0) == pytest.approx(-1)
    assert kloosterman_sum(ctx, 0, 7) == pytest.approx(-1)
    ctx5 = make_context(5)
    k11 = kloosterman_sum(ctx5, 1, 1)
    # 4-term direct sum; x-values give exponents 2,0,0,3 mod 5
    assert k11 == pytest.approx(2 + 2 * math.cos(4 * math.pi / 5), abs=1e-12)


def test_table_identity_full_grid_p53():
    p = 53
    ctx = make_context(p)
    for n in range(p):
        for m in range(p):
            if n == 0 and m == 0:
                continue
            direct = kloosterman_sum(ctx, n, m)
            assert abs(direct.imag) <= 1e-9
            assert abs(direct - kloosterman_value(ctx, n, m)) <= 1e-9


def test_weil_bound_grid():
    for p in (53, 101):
        ctx = make_context(p)
        tab = kloosterman_table(ctx)
        assert np.abs(tab[1:]).max() <= 2 * math.sqrt(p) + 1e-9
        assert tab[0] == pytest.approx(-1)
        assert kloosterman_value(ctx, 0, 0) == p - 1


def test_bilinear_form_examples():
    ctx = make_context(101)
    d1 = WeightFn.delta(ctx, 1)
    assert bilinear_form(d1, d1) == pytest.approx(kloosterman_value(ctx, 1, 1))
    rng = rng_for("bil")
    beta = WeightFn(ctx, np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                                   for _ in range(101)]))
    d0 = WeightFn.delta(ctx, 0)
    expect = beta.values[0] * 100 + sum(beta.values[m] * -1 for m in range(1, 101))
    assert bilinear_form(d0, beta) == pytest.approx(expect, rel=1e-9)


def test_direct_vs_spectral():
    rng = rng_for("dvs")
    ctx = make_context(101)
    for trial in range(12):
        na, nb = rng.randrange(1, 30), rng.randrange(1, 30)
        alpha = WeightFn.from_pairs(
            ctx, {rng.randrange(101): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                  for _ in range(na)})
        beta = WeightFn.from_pairs(
            ctx, {rng.randrange(101): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                  for _ in range(nb)})
        sd = bilinear_form(alpha, beta, "direct")
        ss = bilinear_form(alpha, beta, "spectral")
        assert abs(sd - ss) <= 1e-7 * max(1.0, abs(sd))


def test_conjugation_symmetry():
    # S(conj a reflected, conj b reflected) = conj S(a,b) via x -> -x
    rng = rng_for("conj")
    p = 53
    ctx = make_context(p)
    av = np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(p)])
    bv = np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(p)])
    alpha, beta = WeightFn(ctx, av), WeightFn(ctx, bv)
    ar = np.conj(av[np.array([(-x) % p for x in range(p)])])
    br = np.conj(bv[np.array([(-x) % p for x in range(p)])])
    lhs = bilinear_form(WeightFn(ctx, ar), WeightFn(ctx, br), "direct")
    rhs = bilinear_form(alpha, beta, "direct").conjugate()
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_bound_basic():
    ctx = make_context(101)
    d1 = WeightFn.delta(ctx, 1)
    rep = bound_basic(d1, d1)
    assert rep.passed
    assert rep.lhs <= 2 * math.sqrt(101)
    rng = rng_for("basic")
    signs = WeightFn.from_pairs(ctx, {1 + j: rng.choice((-1.0, 1.0))
                                      for j in range(10)})
    rep = bound_basic(signs, signs)
    assert rep.passed and rep.extra["holds_l2"] and rep.extra["holds_weil"]
    # both weights on 0: the Weil-range bound legitimately breaks
    d0 = WeightFn.delta(ctx, 0)
    rep0 = bound_basic(d0, d0)
    assert rep0.extra["supports_hit_zero"]
    assert not rep0.extra["holds_weil"]
    assert rep0.passed  # still passes: the l2 bound holds and 0 is flagged


def test_barrier_diagnostic():
    p = 401
    ctx = make_context(p)
    n = int(math.isqrt(p))
    ind = WeightFn.from_set(FpSet(ctx, range(1, n + 1)))
    rep = bound_basic(ind, ind)
    # both right-hand sides sit near p^{3/2} for sqrt(p)-sized indicators
    for rhs in rep.rhs_terms.values():
        assert p ** 1.4 <= rhs <= 4 * p ** 1.6


def test_bound_thm_NM():
    p = 401
    ctx = make_context(p)
    n = int(math.isqrt(p))
    alpha = WeightFn.from_set(FpSet(ctx, range(1, n + 1)))
    rep = bound_thm_NM(alpha, alpha, n, n, 0, 0)
    assert rep.passed
    assert rep.extra["saving_exponent"] < 1.5
    # at N = M = sqrt(p) the L^{4/3} premise fails at desk scale
    assert not rep.extra["premise_second"]
    small = WeightFn.from_set(FpSet(ctx, range(1, 6)))
    rep_small = bound_thm_NM(small, small, 5, 5, 0, 0)
    assert rep_small.extra["premise_second"] and rep_small.passed
    # singleton masses: trivial
    d = WeightFn.delta(ctx, 3)
    rep1 = bound_thm_NM(d, d, 5, 5, 2, 2)
    assert rep1.passed
    # support violation
    with pytest.raises(ValueError, match="support"):
        bound_thm_NM(alpha, alpha, 3, n, 0, 0)


def test_bound_thm_NM_premise_gate():
    # large N,M relative to p push the premise to fail; only bound 1 applies
    p = 101
    ctx = make_context(p)
    n = 60
    alpha = WeightFn.from_set(FpSet(ctx, range(1, n + 1)))
    rep = bound_thm_NM(alpha, alpha, n, n, 0, 0)
    assert not rep.extra["premise_second"]
    assert rep.extra["rhs_second"] is None
    assert rep.passed


def test_saving_row():
    ctx = make_context(101)
    alpha = WeightFn.from_set(FpSet(ctx, range(1, 11)))
    row = saving_row(ctx, alpha, alpha)
    assert row["trivial_ok"] and row["delta"] >= 0 and not row["degenerate"]
    d = WeightFn.delta(ctx, 1)
    assert saving_row(ctx, d, d)["degenerate"]
