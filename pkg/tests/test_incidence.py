import math
from fractions import Fraction

import pytest

from hypenergy.field import FpSet, dilate, make_context
from hypenergy.incidence import (additive_energy_int, bound_asym_Z,
                                 bound_progression, bound_prop_Re, bound_rAA,
                                 bound_thm1, bound_thm_hyp_full,
                                 count_hyperbola, count_hyperbola_brute,
                                 count_hyperbola_int, deviation, rho_bound,
                                 shift_inverse_profile)

from helpers import rand_fpset, rng_for


def test_count_examples():
    ctx = make_context(11)
    one = count_hyperbola(FpSet(ctx, [1]), FpSet(ctx, [2]), FpSet(ctx, [3]),
                          FpSet(ctx, [4]), 10)
    assert one == 1  # (1+2)(3+4) = 21 = 10 mod 11
    zero = count_hyperbola(FpSet(ctx, [0]), FpSet(ctx, [0]), FpSet(ctx, [0]),
                           FpSet(ctx, [0]), 1)
    assert zero == 0
    with pytest.raises(ValueError):
        count_hyperbola(FpSet(ctx, [1]), FpSet(ctx, [1]), FpSet(ctx, [1]),
                        FpSet(ctx, [1]), 0)


def test_full_field_closed_form():
    p = 7
    ctx = make_context(p)
    F = FpSet(ctx, range(p))
    cnt = count_hyperbola(F, F, F, F, 1)
    assert cnt == p * p * (p - 1)
    assert cnt == count_hyperbola_brute(F, F, F, F, 1)
    assert deviation(F, F, F, F, 1) == -p * p  # p^2(p-1) - p^3


def test_fast_path_matches_bruteforce():
    rng = rng_for("hyp")
    for trial in range(25):
        p = rng.choice([7, 11, 53, 101])
        sets = [rand_fpset(p, rng.randrange(1, 9), rng) for _ in range(4)]
        lam = rng.randrange(1, p)
        fast = count_hyperbola(*sets, lam)
        assert fast == count_hyperbola_brute(*sets, lam)


def test_symmetries_and_dilation():
    rng = rng_for("sym")
    p = 53
    A, B, C, D = (rand_fpset(p, 6, rng) for _ in range(4))
    lam = 9
    base = count_hyperbola(A, B, C, D, lam)
    assert base == count_hyperbola(B, A, C, D, lam)
    assert base == count_hyperbola(C, D, A, B, lam)
    m = rng.randrange(1, p)
    minv = pow(m, -1, p)
    assert base == count_hyperbola(dilate(A, m), dilate(B, m),
                                   dilate(C, minv), dilate(D, minv), lam)
    empty = FpSet(make_context(p), [])
    assert deviation(empty, B, C, D, lam) == 0


def test_deviation_exact_rational():
    ctx = make_context(11)
    A = FpSet(ctx, [1, 2])
    d = deviation(A, A, A, A, 3)
    assert isinstance(d, Fraction)
    assert d == count_hyperbola(A, A, A, A, 3) - Fraction(16, 11)


def test_bound_thm1_shapes():
    rng = rng_for("b1")
    p = 101
    ctx = make_context(p)
    singles = [FpSet(ctx, [rng.randrange(p)]) for _ in range(4)]
    rep = bound_thm1(*singles, 5)
    assert rep.passed and float(rep.deviation) <= 1.0
    sets = [rand_fpset(p, 12, rng) for _ in range(4)]
    rep = bound_thm1(*sets, 5)
    assert rep.passed
    assert set(rep.rhs_terms) == {"a14_bc_d12", "a34_bc4148_d12"}
    rep2 = bound_thm_hyp_full(*sets, 5)
    assert rep2.passed
    assert rep2.extra["branch1"] > 0 and rep2.extra["branch2"] > 0


def test_bound_progression_requires_intervals():
    ctx = make_context(101)
    rng = rng_for("bp")
    A = rand_fpset(101, 8, rng)
    D = rand_fpset(101, 8, rng)
    B = FpSet(ctx, range(10, 25))
    C = FpSet(ctx, range(40, 55))
    rep = bound_progression(A, B, C, D, 7)
    assert rep.passed
    with pytest.raises(ValueError):
        bound_progression(A, rand_fpset(101, 5, rng), C, D, 7)


def test_bound_rAA_premises_recorded():
    ctx = make_context(1009)
    A = FpSet(ctx, range(50, 75))  # AP of size 25: |A-A| = 49
    rep = bound_rAA(A, 17)
    assert rep.passed
    assert rep.extra["premise_statement"] == (49 ** 92 <= 1009 ** 52)
    assert "premise_proof" in rep.extra
    assert rep.extra["K"] == len(FpSet(ctx, [(a + b) % 1009 for a in A for b in A])) / 25


# ---------------------------------------------------------------- integer mode

def test_count_int_matches_bruteforce():
    rng = rng_for("int")
    for trial in range(10):
        A = [rng.randrange(-12, 13) for _ in range(6)]
        B = [rng.randrange(-12, 13) for _ in range(5)]
        C = [rng.randrange(-12, 13) for _ in range(5)]
        D = [rng.randrange(-12, 13) for _ in range(6)]
        lam = rng.choice([1, -4, 12, 60])
        brute = sum(1 for a in set(A) for b in set(B) for c in set(C)
                    for d in set(D) if (a + b) * (c + d) == lam)
        assert count_hyperbola_int(A, B, C, D, lam) == brute


def test_rho_bound_properties():
    assert rho_bound([0], [0])[0] == pytest.approx(1.0)
    B = list(range(1, 9))
    rho, k_star, comp = rho_bound(B, B)
    assert 0 < rho <= comp  # trivial-energy comparison dominates
    # dilation invariance
    rho2, _, _ = rho_bound([5 * b for b in B], B)
    assert rho == pytest.approx(rho2)
    eb = additive_energy_int(B)
    assert eb == 344  # sum of (8-|d|)^2, d in [-7,7]


def test_bound_asym_Z():
    A = list(range(-15, 16))
    D = list(range(-20, 21))
    B = [2 * j for j in range(1, 7)]
    C = list(range(1, 7))
    rep = bound_asym_Z(A, B, C, D, 12)
    assert rep.passed
    assert rep.extra["rho"] <= rep.extra["rho_comparison"]


def test_bound_prop_Re():
    A = list(range(-10, 11))
    D = list(range(-12, 13))
    rep = bound_prop_Re(A, D, 2, 5, lam=12)
    assert rep.passed
    # direct oracle for the diagonal equation
    brute = sum(1 for j in range(1, 6) for a in set(A) for d in set(D)
                if (a + 2 * j) * (2 * j + d) == 12)
    assert rep.lhs == brute
    with pytest.raises(ValueError):
        bound_prop_Re(A, D, 1, 5)


def test_shift_inverse_profile():
    p = 101
    ctx = make_context(p)
    A = FpSet(ctx, range(1, 21))
    rows, best = shift_inverse_profile(A, 5)
    assert [i for i, _ in rows] == [2, 4, 6, 8, 10]
    # independent elementwise oracle
    for i, cnt in rows:
        S = {(a + i) % p for a in A}
        inv = {pow(x, -1, p) for x in S if x != 0}
        assert cnt == len(S & inv)
    assert best == min(rows, key=lambda r: r[1])[0]
    empty = FpSet(ctx, [])
    rows0, _ = shift_inverse_profile(empty, 3)
    assert all(c == 0 for _, c in rows0)
    # self-inverse pair {1, p-1}
    pair = FpSet(ctx, [(1 - 2) % p, (p - 1 - 2) % p])
    rows2, _ = shift_inverse_profile(pair, 1)
    assert rows2[0] == (2, 2)
    with pytest.raises(ValueError):
        shift_inverse_profile(A, 60)  # 2N >= p
