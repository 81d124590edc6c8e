"""Acceptance criteria 1-9, one timed check each.

Every check prints a single PASS/FAIL line.  Run with ``pytest -v`` (lines are
printed with capture disabled) or directly with ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction
from itertools import combinations
from math import factorial
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import two_edge_split_pairs  # noqa: E402

from dblshuffle import moduli  # noqa: E402
from dblshuffle.ncseries import NCSeries, check_dmr0, kz_associator, nc_exp  # noqa: E402
from dblshuffle.numeric import eval_mzv, verify_mpl_pde  # noqa: E402
from dblshuffle.padic import (  # noqa: E402
    PAdicContext,
    eval_li_one_padic,
    padic_log,
    verify_integral_shuffle_padic,
    verify_series_shuffle_padic,
)
from dblshuffle.ratfunc import variable  # noqa: E402
from dblshuffle.regularization import check_regularization_relation, reg_integral  # noqa: E402
from dblshuffle.relations import generate_double_shuffle, relation_span, verify_relations_numeric  # noqa: E402
from dblshuffle.symbols import Poly  # noqa: E402
from dblshuffle.words import compositions, indices_up_to, is_admissible  # noqa: E402

z = Poly.zeta


class Failed(Exception):
    pass


def require(cond, message):
    if not cond:
        raise Failed(message)


def criterion_1():
    T = Poly.T()
    for n in range(1, 9):
        require(reg_integral("B" * n) == (-T) ** n / factorial(n), f"B^{n}")
    return "reg_integral(B^n) = (-T)^n/n! for n = 1..8"


def criterion_2():
    indices = list(indices_up_to(6))
    bad = [i for i in indices if not check_regularization_relation(i).holds]
    require(not bad, f"fails for {bad}")
    return f"{len(indices)} indices of weight <= 6"


def criterion_3():
    r4 = generate_double_shuffle(4)
    require(relation_span(r4).contains(4 * z((1, 3)) - z((4,))), "4ζ(1,3) - ζ(4) not in span")
    res4 = verify_relations_numeric(r4, 30).max_residual
    r3 = generate_double_shuffle(3)
    require(relation_span(r3).contains(z((1, 2)) - z((3,))), "ζ(1,2) - ζ(3) not in span")
    res3 = verify_relations_numeric(r3, 30).max_residual
    a, b = eval_mzv((1, 2), 30), eval_mzv((3,), 30)
    euler = abs(a.value - b.value)
    require(max(res3, res4, euler) < 1e-20, f"residuals {res3:.1e}, {res4:.1e}, {float(euler):.1e}")
    return f"weight 3 residual {res3:.1e}, weight 4 residual {res4:.1e}"


def criterion_4():
    worst = 0
    for w in range(2, 7):
        rels = generate_double_shuffle(w)
        if rels:
            worst = max(worst, verify_relations_numeric(rels, 30).max_residual)
        ranks = {relation_span(generate_double_shuffle(w, seed=s)).rank for s in (None, 11, 22)}
        require(len(ranks) == 1, f"weight {w} ranks {ranks}")
    require(worst < 1e-20, f"max residual {worst:.1e}")
    return f"weights 2-6, max residual {worst:.1e}, ranks order independent"


def criterion_5():
    eps = mpmath.mpf(10) ** -25
    with mpmath.workdps(45):
        require(abs(eval_mzv((2,), 30).value - mpmath.pi**2 / 6) < eps, "ζ(2)")
        require(abs(eval_mzv((4,), 30).value - mpmath.pi**4 / 90) < eps, "ζ(4)")
    count = 0
    for w in range(2, 6):
        for c in compositions(w):
            if not is_admissible(c):
                continue
            a, b = eval_mzv(c, 30, "holder"), eval_mzv(c, 30, "direct")
            require(abs(a.value - b.value) <= a.error + b.error, f"{c}")
            count += 1
    return f"constants to 1e-25, {count} indices agree within bounds"


PDE_POINTS = {
    1: [("0.3",), ("0.5",), ("-0.4",), ("0.7",), ("0.2",)],
    2: [("0.3", "0.5"), ("0.6", "0.4"), ("-0.3", "0.7"), ("0.5", "0.5"), ("0.8", "0.2")],
    3: [("0.5", "0.6", "0.7"), ("0.3", "0.4", "0.5"), ("0.8", "0.5", "-0.4"), ("0.6", "0.6", "0.6"), ("0.4", "0.9", "0.3")],
}


def criterion_6():
    worst = 0.0
    ratios = []
    for w in range(1, 4):
        for c in compositions(w):
            for pt in PDE_POINTS[len(c)]:
                d1 = float(verify_mpl_pde(c, pt, Fraction(1, 10**4), 25))
                d2 = float(verify_mpl_pde(c, pt, Fraction(1, 2 * 10**4), 25))
                worst = max(worst, d1)
                require(d1 < 1e-6, f"{c} at {pt}: {d1:.1e}")
                if d1 > 1e-15:
                    ratios.append(d1 / d2)
                    require(3 < d1 / d2 < 5, f"{c} at {pt}: step ratio {d1 / d2:.2f}")
    return f"max deviation {worst:.1e}, error ratios {min(ratios):.2f}-{max(ratios):.2f} on halving the step"


def criterion_7():
    N = 15
    worst = N
    for p in (5, 7):
        pts = {1: [p], 2: [2, p], 3: [1, 3, p]}
        for branch in (0, 1):
            ctx = PAdicContext(p, N, branch)
            for wa in range(1, 4):
                for wb in range(1, 5 - wa):
                    for a in compositions(wa):
                        for b in compositions(wb):
                            y = [Fraction(1, 2), 2 * p] if len(b) == 2 else [3 * p] if len(b) == 1 else [1, 3, p]
                            v = verify_series_shuffle_padic(a, pts[len(a)], b, y, ctx)
                            u = verify_integral_shuffle_padic(a, b, 2 * p, ctx)
                            worst = min(worst, v, u)
                            require(min(v, u) >= N - 3, f"p={p} a={branch} {a}*{b}: {v}, {u}")
            li = eval_li_one_padic((1,), p, ctx)
            v = (li + padic_log(1 - p, ctx)).valuation()
            worst = min(worst, v)
            require(v >= N - 3, f"Li1({p}) at branch {branch}: valuation {v}")
    return f"worst residual valuation {worst} >= {N - 3}"


def criterion_8():
    rng = random.Random(8)
    problems = []
    cond3_failures = 0
    for _ in range(20):
        alpha = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
        beta = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
        rep = check_dmr0(nc_exp(NCSeries(6, {"A": alpha, "B": beta})))
        if rep.condition1:
            problems.append(f"condition 1 accepted α={alpha}, β={beta}")
        if not rep.condition2:
            problems.append(f"condition 2 failed α={alpha}, β={beta}")
        if not rep.condition3:
            cond3_failures += 1
    zero = check_dmr0(nc_exp(NCSeries(6, {"A": 0, "B": 0})))
    if not (zero.condition1 and zero.condition2 and zero.condition3):
        problems.append("α=β=0 rejected")
    kz = check_dmr0(kz_associator(5, "complex", 30).substitute_b_sign(), tol=1e-15)
    if not (kz.condition1 and kz.condition2 and kz.condition3):
        problems.append(f"KZ residual {kz.worst_residual:.1e}")
    if cond3_failures:
        problems.append(f"exp(αA+βB) fails condition 3 for {cond3_failures}/20 pairs (false whenever αβ ≠ 0)")
    require(not problems, "; ".join(problems))
    return f"20 exponentials and Φ_KZ(A,-B) (worst residual {kz.worst_residual:.1e})"


def criterion_9():
    for n in range(5, 10):
        labels = frozenset(range(1, n + 1))
        brute = {frozenset([frozenset(s), labels - frozenset(s)]) for k in range(2, n - 1) for s in combinations(sorted(labels), k)}
        require(len(moduli.boundary_divisors(n)) == len(brute) == 2 ** (n - 1) - n - 1, f"count n={n}")
    pairs = 0
    for n in range(4, 9):
        divs = moduli.boundary_divisors(n)
        chains = two_edge_split_pairs(n)
        for pair in chains:
            P, Q = sorted(pair, key=str)
            tree = moduli.StableTree.from_splits(range(1, n + 1), [P.first, Q.first])
            require(moduli.contracts_to(tree, moduli.StableTree.one_edge(P)), f"{P} {Q}")
            require(moduli.contracts_to(tree, moduli.StableTree.one_edge(Q)), f"{P} {Q}")
        for i, P in enumerate(divs):
            for Q in divs[i:]:
                expected = P == Q or frozenset([P, Q]) in chains
                require(moduli.divisors_intersect(P, Q) == expected, f"{P} ∩ {Q}")
                pairs += 1
    t = variable()
    for N in range(2, 7):
        require(moduli.project(N, moduli.iota(N, t)) == moduli.iota(N - 1, t), f"project∘iota N={N}")
    for N in range(1, 7):
        for r in range(1, N + 1):
            for I in combinations(range(1, N + 1), r):
                require(moduli.zdiv_residue(N, I) == Fraction(len(I), N), f"zdiv N={N} I={I}")
    for N in range(1, 6):
        require(moduli.limit_of_diagonal(N) == moduli.point_R(N), f"limit N={N}")
    return f"counts n=5..9, {pairs} divisor pairs, project∘iota, residues, limits"


CRITERIA = [
    (1, "regularization base cases", criterion_1, 1),
    (2, "regularization relation up to weight 6", criterion_2, 10),
    (3, "double shuffle at weights 3 and 4", criterion_3, 30),
    (4, "relation sets at weights 2-6", criterion_4, 300),
    (5, "numeric oracle cross-validation", criterion_5, 120),
    (6, "MPL differential system", criterion_6, 120),
    (7, "p-adic shuffle identities", criterion_7, 60),
    (8, "DMR0 membership", criterion_8, 120),
    (9, "moduli combinatorics and limits", criterion_9, 120),
]


def run_criterion(fn, limit):
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except Failed as exc:
        detail, ok = str(exc), False
    elapsed = time.perf_counter() - start
    if ok and elapsed >= limit:
        ok, detail = False, f"{detail}; too slow"
    return ok, f"{detail} [{elapsed:.1f} s, limit {limit} s]"


@pytest.mark.parametrize("number,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, limit, capsys):
    ok, detail = run_criterion(fn, limit)
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}")
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, title, fn, limit in CRITERIA:
        ok, detail = run_criterion(fn, limit)
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}", flush=True)
    sys.exit(1 if failures else 0)
