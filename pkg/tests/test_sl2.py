import random
from collections import Counter

import numpy as np
import pytest

from hypenergy import energies
from hypenergy.field import FpSet, make_context
from hypenergy.incidence import additive_energy_int
from hypenergy.sl2 import (Mat2, MatSet, action_sum, alternating_pattern,
                           counting_lemma_check, e_lk_group, e_rk_group,
                           enumerate_sl2, free_group_check, g_diag_set,
                           g_lambda_set, g_lambda_set_int, identity,
                           lower_unipotent, mobius_apply, mobius_images,
                           proj_indicator, t_2k_integer_mode, t_k_fn,
                           t_k_group, trace_formula_check,
                           transitivity_bound_check, unipotent_u, v_matrix,
                           word_multiplicities)

from helpers import oracle_t_k_group, rand_fpset, rng_for


def rand_sl2(p, rng):
    return (unipotent_u(rng.randrange(p), p)
            .mul(lower_unipotent(rng.randrange(p), p))
            .mul(unipotent_u(rng.randrange(p), p)))


def rand_gl2(p, rng):
    while True:
        m = Mat2(rng.randrange(p), rng.randrange(p), rng.randrange(p),
                 rng.randrange(p), p)
        if m.det != 0:
            return m


# ----------------------------------------------------------- matrix algebra

def test_unipotent_identities():
    assert unipotent_u(0, 7).is_identity()
    p = 53
    rng = rng_for("uni")
    for _ in range(10):
        a1, a2 = rng.randrange(p), rng.randrange(p)
        assert unipotent_u(a1, p).mul(unipotent_u(a2, p)).key() == \
            unipotent_u(a1 + a2, p).key()
        lam = rng.randrange(1, p)
        b1, b2 = rng.randrange(p), rng.randrange(p)
        lhs = v_matrix(b1, lam, p).mul(v_matrix(b2, lam, p).inv())
        assert lhs.key() == lower_unipotent(pow(lam, -1, p) * (b1 - b2), p).key()


def test_v_matrix_rejects_zero_lambda():
    with pytest.raises(ValueError):
        v_matrix(3, 0, 7)
    with pytest.raises(ValueError):
        v_matrix(3, 14, 7)  # 14 = 0 mod 7


def test_g_lambda_set_shape():
    ctx = make_context(7)
    A = FpSet(ctx, [0, 1, 3])
    B = FpSet(ctx, [2, 5])
    G = g_lambda_set(A, B, 1)
    assert len(G) == 6
    assert all(m.det == 1 for m in G)
    single = g_lambda_set(FpSet(ctx, [0]), FpSet(ctx, [0]), 1)
    (m,) = single.mats
    assert m.key() == (0, 1, 7 - 1, 0)  # [[0,1],[-1,0]]
    Gd = g_diag_set(A, 2)
    assert len(Gd) == 3 and all(m.det == 2 for m in Gd)


def test_matset_rejects_singular_and_mixed():
    with pytest.raises(ValueError, match="singular"):
        MatSet([Mat2(1, 0, 0, 0, 7)])
    with pytest.raises(ValueError, match="mixed"):
        MatSet([identity(7), identity()])


def test_mobius_examples():
    p = 7
    g = unipotent_u(0, p).mul(v_matrix(0, 1, p))
    assert mobius_apply(identity(p), 3) == 3
    assert mobius_apply(g, 3) == 2  # 0 + 1/(0-3) = inv(4) = 2 mod 7
    gb = unipotent_u(4, p).mul(v_matrix(5, 1, p))
    assert mobius_apply(gb, 5) == p  # pole x = b maps to infinity
    ctx = make_context(p)
    perm = mobius_images(ctx, np.array([g.key()], dtype=np.int64))[0]
    assert perm[3] == 2 and perm[0] == p or True
    for x in range(p + 1):
        assert perm[x] == mobius_apply(g, x)


# ------------------------------------------------------------- T_k energies

def test_t_k_trivial_cases():
    G1 = MatSet([identity(5)])
    for k in (1, 2, 3):
        assert t_k_group(G1, k) == 1
    G = MatSet([rand_sl2(7, rng_for("tkt", i)) for i in range(4)])
    assert t_k_group(G, 1) == len(G) ** 2


def test_t_k_matches_bruteforce_sl2_f5():
    rng = rng_for("brute5")
    for trial in range(5):
        mats = {rand_sl2(5, rng).key() for _ in range(4)}
        G = MatSet([Mat2(*k, 5) for k in mats])
        assert t_k_group(G, 2) == oracle_t_k_group(list(G.mats), 2)
        assert t_k_group(G, 3) == oracle_t_k_group(list(G.mats), 3)


def test_t2_identity_random_instances():
    rng = rng_for("t2id")
    for trial in range(12):
        p = rng.choice([7, 11, 13, 53, 101])
        A = rand_fpset(p, rng.randrange(2, 9), rng)
        B = rand_fpset(p, rng.randrange(2, 9), rng)
        lam = rng.randrange(1, p)
        G = g_lambda_set(A, B, lam)
        expect = (len(A) ** 2 * (energies.additive_energy(B) - len(B) ** 2)
                  + len(B) ** 2 * energies.additive_energy(A))
        assert t_k_group(G, 2) == expect


def test_erk_elk_identities():
    rng = rng_for("erk")
    for trial in range(6):
        p = rng.choice([7, 11, 53])
        A = rand_fpset(p, rng.randrange(2, 7), rng)
        B = rand_fpset(p, rng.randrange(2, 7), rng)
        G = g_lambda_set(A, B, rng.randrange(1, p))
        for k in (2, 3):
            erk = e_rk_group(G, k)
            assert erk == (len(A) ** 2 * (energies.e_plus_k(B, k) - len(B) ** k)
                           + len(B) ** k * energies.e_plus_k(A, k))
            elk = e_lk_group(G, k)
            assert elk <= (len(B) ** 2 * energies.e_plus_k(A, k)
                           + len(A) ** k * energies.e_plus_k(B, k))
        assert e_rk_group(G, 2) == t_k_group(G, 2)
        assert e_rk_group(MatSet([G.mats[0]]), 3) == 1


def test_t3_inequality_exact():
    rng = rng_for("t3")
    for trial in range(6):
        p = rng.choice([7, 11, 53])
        A = rand_fpset(p, rng.randrange(2, 8), rng)
        B = rand_fpset(p, rng.randrange(2, 8), rng)
        G = g_lambda_set(A, B, rng.randrange(1, p))
        cap = (len(A) * len(B) * energies.d2_quantity(A, B)
               + len(A) ** 4 * len(B) ** 4)
        assert t_k_group(G, 3) <= cap


def test_bi_invariance_and_inverse():
    rng = rng_for("binv")
    p = 13
    G = MatSet([rand_sl2(p, rng) for _ in range(5)])
    for k in (2, 3):
        tk = t_k_group(G, k)
        g = rand_gl2(p, rng)
        assert t_k_group(G.left_translate(g), k) == tk
        assert t_k_group(G.right_translate(g), k) == tk
        assert t_k_group(G.inverse(), k) == tk


def test_monotonicity_in_k():
    rng = rng_for("mono")
    p = 11
    G = MatSet([rand_sl2(p, rng) for _ in range(6)])
    n = len(G)
    assert t_k_group(G, 2) <= n ** 2 * t_k_group(G, 1)
    assert t_k_group(G, 3) <= n ** 2 * t_k_group(G, 2)


def test_sup_bound_r_infty():
    rng = rng_for("rinf")
    p = 11
    G = MatSet([rand_sl2(p, rng) for _ in range(5)])
    ents, counts = word_multiplicities(G, (1, -1, 1, -1))
    assert int(counts.max()) <= t_k_group(G, 2)


def test_cauchy_schwarz_cascade():
    rng = rng_for("cs")
    p = 7

    def t2_multi(A_, B_, C_, D_):
        mab = Counter(a.mul(b.inv()).key() for a in A_ for b in B_)
        mcd = Counter(c.mul(d.inv()).key() for c in C_ for d in D_)
        return sum(v * mcd.get(k, 0) for k, v in mab.items())

    from hypenergy.sl2 import t_2_pair

    for trial in range(8):
        sets = [[rand_sl2(p, rng) for _ in range(rng.randrange(2, 5))]
                for _ in range(4)]
        A_, B_, C_, D_ = sets
        e = t2_multi(A_, B_, C_, D_)
        assert e ** 4 <= (t2_multi(A_, A_, A_, A_) * t2_multi(B_, B_, B_, B_)
                          * t2_multi(C_, C_, C_, C_) * t2_multi(D_, D_, D_, D_))
        eab = t2_multi(A_, B_, A_, B_)
        assert eab ** 2 <= t2_multi(A_, A_, A_, A_) * t2_multi(B_, B_, B_, B_)
        MA = MatSet([Mat2(*k, p) for k in {m.key() for m in A_}])
        MB = MatSet([Mat2(*k, p) for k in {m.key() for m in B_}])
        assert t_2_pair(MA, MB) ** 2 <= t_k_group(MA, 2) * t_k_group(MB, 2)
        assert t_2_pair(MA, MA) == t_k_group(MA, 2)


def test_norm_property_on_sl2_f3():
    group = enumerate_sl2(3)
    rng = rng_for("norm")
    k = 2
    for trial in range(20):
        f = [rng.uniform(0, 1) for _ in group]
        g = [rng.uniform(0, 1) for _ in group]
        tf = t_k_fn(group, f, k) ** (1 / (2 * k))
        tg = t_k_fn(group, g, k) ** (1 / (2 * k))
        tfg = t_k_fn(group, [a + b for a, b in zip(f, g)], k) ** (1 / (2 * k))
        assert tfg <= tf + tg + 1e-9
        l2k = sum(abs(v) ** (2 * k) for v in f) ** (1 / (2 * k))
        assert tf >= l2k - 1e-9
    ind = [1.0 if m.key() in {x.key() for x in group[:5]} else 0.0 for m in group]
    assert abs(t_k_fn(group, ind, 2) -
               t_k_group(MatSet(group[:5]), 2)) < 1e-6


# ------------------------------------------------------------------- actions

def test_action_sum_identity_group():
    ctx = make_context(11)
    G = MatSet([identity(11)])
    rng = rng_for("act")
    f1 = np.array([rng.randrange(4) for _ in range(12)], dtype=np.int64)
    f2 = np.array([rng.randrange(4) for _ in range(12)], dtype=np.int64)
    assert action_sum(ctx, G, f1, f2) == int((f1 * f2).sum())


def test_counting_lemma_exact_integers():
    rng = rng_for("cl")
    for trial in range(8):
        p = rng.choice([7, 11, 13])
        ctx = make_context(p)
        G = MatSet([rand_sl2(p, rng) for _ in range(rng.randrange(2, 6))])
        f1 = np.array([rng.randrange(3) for _ in range(p + 1)], dtype=np.int64)
        f2 = np.array([rng.randrange(3) for _ in range(p + 1)], dtype=np.int64)
        for k in (1, 2):
            rep = counting_lemma_check(ctx, G, f1, f2, k)
            assert rep.passed
            assert isinstance(rep.lhs, int)


def test_transitivity_affine_and_projective():
    rng = rng_for("trans")
    ctx = make_context(101)
    G = MatSet([Mat2(rng.randrange(1, 101), rng.randrange(101), 0, 1, 101)
                for _ in range(50)])
    A = rng.sample(range(101), 10)
    B = rng.sample(range(101), 10)
    rep = transitivity_bound_check(ctx, G, A, B, 2)
    assert rep.passed
    single = transitivity_bound_check(
        ctx, MatSet([Mat2(1, 3, 0, 1, 101)]), A, B, 2)
    assert single.lhs <= len(A) * len(B) + 1
    Gp = g_lambda_set(rand_fpset(101, 6, rng), rand_fpset(101, 6, rng), 5)
    rep3 = transitivity_bound_check(ctx, Gp, A + [101], B, 3)
    assert rep3.passed
    assert rep3.extra["projected_size"] <= len(Gp)


def test_transitivity_rejects_bad_kind():
    ctx = make_context(7)
    G = MatSet([identity(7)])
    with pytest.raises(ValueError, match="unsupported action kind"):
        transitivity_bound_check(ctx, G, [1], [2], 4)
    with pytest.raises(ValueError, match="affine"):
        transitivity_bound_check(ctx, MatSet([v_matrix(1, 1, 7)]), [1], [2], 2)


# ------------------------------------------------------------ trace formula

def test_trace_formula_identity_set():
    G = MatSet([identity(3)])
    rep = trace_formula_check(G, 2)
    assert rep.passed and rep.lhs == 1
    assert rep.extra["trace"] == rep.extra["group_order"]


def test_trace_formula_random():
    rng = rng_for("trace")
    group = enumerate_sl2(3)
    for k in (2, 3):
        for trial in range(4):
            G = MatSet(rng.sample(group, rng.randrange(2, 7)))
            assert trace_formula_check(G, k).passed


def test_trace_formula_guard():
    with pytest.raises(ValueError, match="group too large"):
        enumerate_sl2(101)


# --------------------------------------------------------------- integer mode

def test_free_group_check_examples():
    rep = free_group_check(2, 2, max_len=4, exp_cap=3)
    assert rep.passed
    w = unipotent_u(2).mul(lower_unipotent(2)).mul(unipotent_u(2))
    assert w.key() == (5, 12, 2, 5)
    assert not w.is_identity()
    with pytest.raises(ValueError):
        free_group_check(1, 1)
    # |st| >= 4 admits s=1, t=4
    assert free_group_check(1, 4, max_len=3).passed


def test_free_group_word_count():
    rep = free_group_check(2, 3, max_len=3, exp_cap=2)
    # alternating syllable sequences: 2 * (4 + 16 + 64)
    assert rep.extra["words_checked"] == 2 * (4 + 16 + 64)


def test_t_2k_integer_examples():
    rep = t_2k_integer_mode([1], [1], 5, 1)
    assert rep.lhs == 1 and rep.passed
    rep = t_2k_integer_mode([1, 2], [1, 2], 1, 1)
    # exact oracle over |G|^4 = 256 quadruples
    G = g_lambda_set_int([1, 2], [1, 2], 1)
    assert rep.lhs == oracle_t_k_group(list(G.mats), 2)
    assert rep.lhs <= 8 ** 4 * 2 ** 3 * 2 ** 2


def test_t_2k_integer_identity_route():
    # T_2 of G_lam(B,C) obeys the abelian identity in integer mode as well
    for B, C, lam in (([1, 2, 3], [2, 5, 6], 1), (list(range(1, 7)), [1, 3, 4], 2)):
        rep = t_2k_integer_mode(B, C, lam, 1)
        eb, ec = additive_energy_int(B), additive_energy_int(C)
        nb, nc = len(set(B)), len(set(C))
        assert rep.lhs == nb ** 2 * (ec - nc ** 2) + nc ** 2 * eb


def test_t_2k_integer_k2():
    rep = t_2k_integer_mode([1, 2, 3, 4], [1, 2, 3, 4], 2, 2)
    assert rep.passed
    assert rep.lhs <= (8 * 2) ** 8 * 4 ** 6 * 4 ** 5
    with pytest.raises(ValueError):
        t_2k_integer_mode([1], [1], 0, 1)
    with pytest.raises(ValueError):
        t_2k_integer_mode(list(range(20)), [1], 1, 1)


def test_word_pattern_convention():
    # odd k leaves the last factor un-inverted: T_3 counts g1 g2^-1 g3 words
    assert alternating_pattern(3) == (1, -1, 1)
    assert alternating_pattern(4) == (1, -1, 1, -1)
