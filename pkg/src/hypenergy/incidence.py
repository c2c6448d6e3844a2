"""Hyperbola incidences: exact counts of (a+b)(c+d) = lambda and the
bound evaluators built on them.

The field-mode fast path is a multiplicative pairing of the two additive
rep tables; a quadruple-loop oracle lives alongside for tests.  Integer
mode (exact counts over Z) backs the asymmetric results; there the s = a+b
factor must divide lambda, which makes counting cheap and exact.

Every `bound_*` evaluator returns a BoundReport whose `rhs_terms` are the
named summands of the statement's right-hand side and whose envelope is
the documented stand-in constant 1024 * log2(p)^3 (flat 1024 in integer
mode, where there is no p).
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import energies
from .field import FieldContext, FpSet, is_unit_interval, rep_additive, sumset, difference_set
from .reports import BoundReport


def default_envelope(p: int) -> float:
    return 1024.0 * math.log2(p) ** 3


def _check_lambda(ctx: FieldContext, lam: int) -> int:
    lam = int(lam) % ctx.p
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    return lam


def count_hyperbola(A: FpSet, B: FpSet, C: FpSet, D: FpSet, lam: int) -> int:
    """#{(a,b,c,d) : (a+b)(c+d) = lambda}; O(|A||B| + |C||D| + p).

    The s = 0 fibre is dropped since lambda != 0.
    """
    ctx = A.ctx
    lam = _check_lambda(ctx, lam)
    p = ctx.p
    r1 = rep_additive(A, B, "+").values
    r2 = rep_additive(C, D, "+").values
    s = np.arange(1, p, dtype=np.int64)
    partner = lam * ctx.inv_table[s] % p
    return int(np.dot(r1[s], r2[partner]))


def count_hyperbola_brute(A: FpSet, B: FpSet, C: FpSet, D: FpSet, lam: int) -> int:
    """Quadruple-loop oracle; independent of the convolution fast path."""
    ctx = A.ctx
    lam = _check_lambda(ctx, lam)
    p = ctx.p
    count = 0
    for a in A.elems:
        for b in B.elems:
            s = (a + b) % p
            for c in C.elems:
                for d in D.elems:
                    if s * (c + d) % p == lam:
                        count += 1
    return count


def deviation(A: FpSet, B: FpSet, C: FpSet, D: FpSet, lam: int) -> Fraction:
    """count - |A||B||C||D|/p as an exact rational."""
    main = Fraction(len(A) * len(B) * len(C) * len(D), A.ctx.p)
    return count_hyperbola(A, B, C, D, lam) - main


def _deviation_report(name, A, B, C, D, lam, rhs_terms, envelope, extra=None):
    cnt = count_hyperbola(A, B, C, D, lam)
    main = Fraction(len(A) * len(B) * len(C) * len(D), A.ctx.p)
    rhs = float(sum(rhs_terms.values()))
    dev = cnt - main
    passed = float(dev) <= envelope * rhs
    return BoundReport(name=name, lhs=cnt, main_term=main, rhs_terms=rhs_terms,
                       envelope=envelope, passed=passed,
                       ratio=float(dev) / rhs if rhs else math.inf,
                       extra=extra or {})


def bound_thm1(A: FpSet, B: FpSet, C: FpSet, D: FpSet, lam: int,
               envelope: Optional[float] = None) -> BoundReport:
    """Deviation against |A|^{1/4}|B||C||D|^{1/2} + |A|^{3/4}(|B||C|)^{41/48}|D|^{1/2}."""
    p = A.ctx.p
    if envelope is None:
        envelope = default_envelope(p)
    na, nb, nc, nd = len(A), len(B), len(C), len(D)
    rhs_terms = {
        "a14_bc_d12": na ** 0.25 * nb * nc * nd ** 0.5,
        "a34_bc4148_d12": na ** 0.75 * (nb * nc) ** (41 / 48) * nd ** 0.5,
    }
    return _deviation_report("hyperbola-thm1", A, B, C, D, lam, rhs_terms, envelope)


def bound_thm_hyp_full(A: FpSet, B: FpSet, C: FpSet, D: FpSet, lam: int,
                       envelope: Optional[float] = None) -> BoundReport:
    """Deviation against the min of the two energy-aware branches."""
    p = A.ctx.p
    if envelope is None:
        envelope = default_envelope(p)
    na, nb, nc, nd = len(A), len(B), len(C), len(D)
    eb = energies.additive_energy(B)
    ec = energies.additive_energy(C)
    ebc = energies.additive_energy(B, C)
    branch1 = (nd ** 0.5 * nb * nc
               + na * nd ** 0.5 * (nb * nc) ** (1 / 3)
               * (nb ** (1 / 3) * ec ** (1 / 6) + nc ** (1 / 3) * eb ** (1 / 6)))
    branch2 = (na ** 0.25 * nb * nc * nd ** 0.5
               + na ** 0.75 * (nb * nc) ** (19 / 24) * nd ** 0.5 * ebc ** (1 / 24))
    if branch1 <= branch2:
        rhs_terms = {"energy_branch": branch1}
    else:
        rhs_terms = {"common_energy_branch": branch2}
    return _deviation_report("hyperbola-full", A, B, C, D, lam, rhs_terms, envelope,
                             extra={"E_B": eb, "E_C": ec, "E_BC": ebc,
                                    "branch1": branch1, "branch2": branch2})


def bound_progression(A: FpSet, B: FpSet, C: FpSet, D: FpSet, lam: int,
                      envelope: Optional[float] = None) -> BoundReport:
    """Progression variant: B, C must be step-1 progressions."""
    if not (is_unit_interval(B) and is_unit_interval(C)):
        raise ValueError("B and C must be step-1 arithmetic progressions")
    p = A.ctx.p
    if envelope is None:
        envelope = default_envelope(p)
    na, nb, nc, nd = len(A), len(B), len(C), len(D)
    rhs_terms = {
        "a14_bc_d12": na ** 0.25 * nb * nc * nd ** 0.5,
        "a34_d12_bc56": (na ** 0.75 * nd ** 0.5 * (nb * nc) ** (5 / 6)
                         * (1 + (nb * nc / p) ** (1 / 12))),
    }
    return _deviation_report("hyperbola-progression", A, B, C, D, lam, rhs_terms, envelope)


def bound_rAA(A: FpSet, lam: int, envelope: Optional[float] = None) -> BoundReport:
    """r_{AA}(lambda) for small-doubling A against K^2|A|^2/p + K^{5/4}|A|^{23/24}.

    K = |A+A|/|A| is measured, never assumed.  Both premises attached to the
    refined |A|^{149/156} bound are evaluated in exact integers and recorded:
    the statement's |A-A|^92 <= p^52 and the proof's
    |A-A|^117 <= p^52 |2A-2A|^25.  The refined bound's unspecified O_K gets a
    documented K^{5/2} factor and is asserted only when the first premise holds.
    """
    from .field import rep_multiplicative
    ctx = A.ctx
    p = ctx.p
    lam = _check_lambda(ctx, lam)
    if envelope is None:
        envelope = default_envelope(p)
    n = len(A)
    if n == 0:
        raise ValueError("A must be nonempty")
    S = sumset(A, A)
    K = Fraction(len(S), n)
    lhs = rep_multiplicative(A, A)[lam]
    Kf = float(K)
    rhs_terms = {
        "K2a2_over_p": Kf ** 2 * n ** 2 / p,
        "K54_a2324": Kf ** 1.25 * n ** (23 / 24),
    }
    dm = difference_set(A, A)
    two_a = S
    dd = difference_set(two_a, two_a)
    premise_stmt = len(dm) ** 92 <= p ** 52
    premise_proof = len(dm) ** 117 <= p ** 52 * len(dd) ** 25
    refined = Kf ** 2 * n ** 2 / p + Kf ** 2.5 * n ** (149 / 156)
    refined_ok = (not premise_stmt) or lhs <= envelope * refined
    passed = lhs <= envelope * sum(rhs_terms.values()) and refined_ok
    return BoundReport(name="r_AA", lhs=lhs, main_term=0, rhs_terms=rhs_terms,
                       envelope=envelope, passed=passed,
                       ratio=lhs / sum(rhs_terms.values()),
                       extra={"K": Kf, "premise_statement": premise_stmt,
                              "premise_proof": premise_proof,
                              "refined_rhs": refined, "diff_size": len(dm)})


# ------------------------------------------------------------- integer mode

def _divisor_pairs(lam: int):
    """All factorisations lam = s*t over nonzero integers."""
    out = []
    a = abs(lam)
    for s in range(1, int(math.isqrt(a)) + 1):
        if a % s == 0:
            t = a // s
            for s_ in {s, t}:
                out.append((s_, lam // s_))
                out.append((-s_, lam // -s_))
    return sorted(set(out))


def count_hyperbola_int(A: Iterable[int], B: Iterable[int], C: Iterable[int],
                        D: Iterable[int], lam: int) -> int:
    """Exact #{(a,b,c,d) in AxBxCxD : (a+b)(c+d) = lam} over Z, lam != 0."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    r1 = Counter(a + b for a in set(A) for b in set(B))
    r2 = Counter(c + d for c in set(C) for d in set(D))
    return sum(r1[s] * r2[t] for s, t in _divisor_pairs(lam) if s in r1 and t in r2)


def additive_energy_int(S: Iterable[int]) -> int:
    """E+(S) for a finite integer set."""
    s = sorted(set(S))
    diffs = Counter(x - y for x in s for y in s)
    return sum(c * c for c in diffs.values())


def rho_bound(B: Sequence[int], C: Sequence[int], k_max: int = 20):
    """rho(B,C) = max_k (E+(C)^{k-1} E+(B)^{k-2} / (|B|^{4k-6}|C|^{4k-4}))^{1/(8k-6)}.

    Returns (rho, k_star, comparison) where comparison is the trivial-energy
    value (|B|^k |C|^{k-1})^{-1/(8k-6)} at the maximising k.  The k range is
    capped at k_max; the maximand tends monotonically to the limit
    (E+(B) E+(C) / (|B||C|)^4)^{1/8}, so k_star = k_max signals the cap bound.
    """
    Bs = sorted(set(B))
    Cs = sorted(set(C))
    if not Bs or not Cs:
        raise ValueError("B and C must be nonempty")
    eb = additive_energy_int(Bs)
    ec = additive_energy_int(Cs)
    nb, nc = len(Bs), len(Cs)
    best = None
    for k in range(2, k_max + 1):
        log_num = (k - 1) * math.log(ec) + (k - 2) * math.log(eb)
        log_den = (4 * k - 6) * math.log(nb) + (4 * k - 4) * math.log(nc)
        val = math.exp((log_num - log_den) / (8 * k - 6))
        if best is None or val > best[0]:
            best = (val, k)
    rho, k_star = best
    comparison = (nb ** k_star * nc ** (k_star - 1)) ** (-1 / (8 * k_star - 6))
    return rho, k_star, comparison


def bound_asym_Z(A: Sequence[int], B: Sequence[int], C: Sequence[int],
                 D: Sequence[int], lam: int, envelope: float = 1024.0) -> BoundReport:
    """Integer-mode count against sqrt(|A||D|) |B||C| max(|D|^{-1/2}, rho(B,C)).

    The statement's <<_{|lam|} has no explicit constant; the flat envelope is
    the documented stand-in.  When the refined premise
    |D|^4 >= |B|^{4l-2}|C|^{4l} E+(C)^{-l} E+(B)^{-l+1} holds for some
    l in [2, 8], the refined right-hand side is recorded as well.
    """
    As, Bs, Cs, Ds = (sorted(set(x)) for x in (A, B, C, D))
    cnt = count_hyperbola_int(As, Bs, Cs, Ds, lam)
    rho, k_star, comparison = rho_bound(Bs, Cs)
    na, nb, nc, nd = len(As), len(Bs), len(Cs), len(Ds)
    rhs = math.sqrt(na * nd) * nb * nc * max(nd ** -0.5, rho)
    eb = additive_energy_int(Bs)
    ec = additive_energy_int(Cs)
    refined = None
    for ell in range(2, 9):
        # premise |D|^4 >= |B|^{4l-2} |C|^{4l} E+(C)^{-l} E+(B)^{-l+1}, cleared
        # of the negative powers so the comparison is exact in integers
        if nd ** 4 * ec ** ell * eb ** (ell - 1) >= nb ** (4 * ell - 2) * nc ** (4 * ell):
            val = ((nb * nc) ** (1 / 3) * math.sqrt(na * nd) * nd ** (1 / (6 * ell))
                   * (nb ** 2 * ec ** ell * eb ** (ell - 1)) ** (1 / (6 * ell)))
            refined = (ell, val) if refined is None or val < refined[1] else refined
    return BoundReport(name="asymmetric-int", lhs=cnt, main_term=0,
                       rhs_terms={"sqrtAD_BC_max": rhs}, envelope=envelope,
                       passed=cnt <= envelope * rhs,
                       ratio=cnt / rhs if rhs else math.inf,
                       extra={"rho": rho, "k_star": k_star,
                              "rho_comparison": comparison, "lam": lam,
                              "refined": refined})


def bound_prop_Re(A: Sequence[int], D: Sequence[int], omega: int, N: int,
                  lam: int = 1, envelope: float = 1024.0) -> BoundReport:
    """#{(a+b)(b+d) = lam, b in omega*[N]} vs sqrt(|A||D|) N max(|D|^{-1/2}, N^{-1/5}).

    The diagonal family shares b between the two factors.  |omega| >= 2.
    """
    if abs(omega) < 2:
        raise ValueError("need |omega| >= 2")
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    if N < 1:
        raise ValueError("N must be >= 1")
    As, Ds = sorted(set(A)), sorted(set(D))
    Dset = set(Ds)
    count = 0
    for j in range(1, N + 1):
        b = omega * j
        for a in As:
            s = a + b
            if s != 0 and lam % s == 0:
                if lam // s - b in Dset:
                    count += 1
    rhs = math.sqrt(len(As) * len(Ds)) * N * max(len(Ds) ** -0.5, N ** -0.2)
    return BoundReport(name="diagonal-int", lhs=count, main_term=0,
                       rhs_terms={"sqrtAD_N_max": rhs}, envelope=envelope,
                       passed=count <= envelope * rhs,
                       ratio=count / rhs if rhs else math.inf,
                       extra={"omega": omega, "N": N, "lam": lam})


def shift_inverse_profile(A: FpSet, N: int):
    """|(A+i) cap (A+i)^{-1}| for i in {2, 4, ..., 2N}; and the minimising i.

    Inversion acts elementwise on F_p^*; a 0 in A+i contributes no inverse.
    """
    ctx = A.ctx
    p = ctx.p
    if N < 1:
        raise ValueError("N must be >= 1")
    if 2 * N >= p:
        raise ValueError("need 2N < p")
    rows = []
    best = None
    arr = A.as_array()
    for i in range(2, 2 * N + 1, 2):
        shifted = (arr + i) % p
        nz = shifted[shifted != 0]
        inv = set(int(v) for v in ctx.inv_table[nz])
        cnt = len(inv.intersection(int(v) for v in shifted))
        rows.append((i, cnt))
        if best is None or cnt < best[1]:
            best = (i, cnt)
    return rows, (best[0] if best else None)
