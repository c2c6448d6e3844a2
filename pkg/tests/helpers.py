"""Shared helpers for the test suite: seeded set generators and slow,
definition-level oracles kept deliberately independent of the library's
fast paths."""

import random
from collections import Counter
from itertools import product as iproduct

from hypenergy.field import FpSet, make_context


def rand_fpset(p, n, rng):
    ctx = make_context(p)
    return FpSet(ctx, rng.sample(range(p), min(n, p)))


def rng_for(name: str, salt: int = 0) -> random.Random:
    return random.Random(sum(ord(c) for c in name) * 7919 + salt)


# -------------------------------------------------------------- slow oracles

def oracle_additive_energy(A, B):
    p = A.ctx.p
    count = 0
    for a1, b1, a2, b2 in iproduct(A.elems, B.elems, A.elems, B.elems):
        if (a1 + b1) % p == (a2 + b2) % p:
            count += 1
    return count


def oracle_mult_energy(A, B):
    p = A.ctx.p
    count = 0
    for a1, b1, a2, b2 in iproduct(A.elems, B.elems, A.elems, B.elems):
        if a1 * b1 % p == a2 * b2 % p:
            count += 1
    return count


def oracle_t_plus_k(A, k):
    p = A.ctx.p
    sums = Counter(sum(t) % p for t in iproduct(A.elems, repeat=k))
    return sum(c * c for c in sums.values())


def oracle_e_plus_k(A, k):
    """E_k+ by enumerating k-tuples of pairs sharing one common difference."""
    p = A.ctx.p
    diffs = Counter((a - b) % p for a in A.elems for b in A.elems)
    return sum(c ** k for c in diffs.values())


def oracle_d2(A, B):
    p = A.ctx.p
    prods = Counter((a1 - a2) * (b1 - b2) % p
                    for a1, a2, b1, b2 in iproduct(A.elems, A.elems, B.elems, B.elems))
    return sum(c * c for c in prods.values())


def oracle_rep_product(A, B):
    p = A.ctx.p
    return Counter(a * b % p for a in A.elems for b in B.elems)


def oracle_t_k_group(mats, k):
    """T_k by enumerating all 2k-tuples of matrices; tiny sets only."""
    def word(tup):
        acc = tup[0]
        for i, m in enumerate(tup[1:], start=2):
            acc = acc.mul(m.inv()) if i % 2 == 0 else acc.mul(m)
        return acc.key()

    lefts = Counter(word(t) for t in iproduct(mats, repeat=k))
    return sum(c * c for c in lefts.values())
