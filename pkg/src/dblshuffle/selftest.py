"""Fast invariant checks run by ``dblshuffle selftest``."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Callable


def _check(name: str, fn: Callable[[], tuple[bool, str]]) -> dict:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is reported as a failed check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"name": name, "ok": bool(ok), "detail": detail}


def run_all(digits: int = 30, seed: int = 0) -> list[dict]:
    from . import moduli
    from .ncseries import check_dmr0, kz_associator
    from .numeric import eval_mzv
    from .padic import PAdicContext, eval_li_one_padic, padic_log
    from .regularization import check_regularization_relation, reg_integral, reg_series
    from .relations import generate_double_shuffle, verify_relations_numeric
    from .symbols import Poly
    from .words import count_ordered_surjections, enumerate_ordered_surjections, indices_up_to, shuffle, stuffle

    rng = random.Random(seed)

    def shuffle_counts():
        for _ in range(10):
            u = "".join(rng.choice("AB") for _ in range(rng.randint(0, 4)))
            v = "".join(rng.choice("AB") for _ in range(rng.randint(0, 4)))
            if shuffle(u, v).mass() != comb(len(u) + len(v), len(u)):
                return False, f"{u} ⧢ {v}"
        return True, ""

    def stuffle_counts():
        for r in range(1, 5):
            for s in range(1, 5):
                n = len(enumerate_ordered_surjections(r, s))
                if n != count_ordered_surjections(r, s):
                    return False, f"Sh({r},{s})"
        ok = stuffle((2,), (3,)) == stuffle((3,), (2,))
        return ok, ""

    def base_cases():
        T = Poly.T()
        for n in range(1, 9):
            if reg_integral("B" * n) != (-T) ** n / factorial(n):
                return False, f"B^{n}"
        target = (Poly.T(2) - Poly.zeta((2,))) / 2
        return reg_series((1, 1)) == target, "reg_series(1,1)"

    def regularization_relation():
        bad = [i for i in indices_up_to(5) if not check_regularization_relation(i).holds]
        return not bad, f"failing: {bad}" if bad else "weight <= 5"

    def weight3_relations():
        rels = generate_double_shuffle(3)
        rep = verify_relations_numeric(rels, digits)
        return rep.max_residual < 1e-20, f"max residual {rep.max_residual:.1e}"

    def zeta_two():
        from .numeric import context

        ctx = context(digits)
        v = eval_mzv((2,), digits)
        err = abs(v.value - ctx.pi**2 / 6)
        return err < ctx.mpf(10) ** (-digits + 5), f"error {float(err):.1e}"

    def padic_li1():
        ctx = PAdicContext(7, 12)
        lhs = eval_li_one_padic((1,), 7, ctx)
        rhs = -padic_log(Fraction(-6), ctx)
        v = (lhs - rhs).valuation()
        return v >= 12, f"residual valuation {v}"

    def kz_dmr():
        rep = check_dmr0(kz_associator(4, "complex", digits).substitute_b_sign(), 1e-15)
        return rep.ok, f"worst residual {rep.worst_residual:.1e}"

    def divisor_counts():
        for n in range(4, 9):
            if len(moduli.boundary_divisors(n)) != 2 ** (n - 1) - n - 1:
                return False, f"n={n}"
        return True, ""

    def point_r():
        for N in range(1, 5):
            if moduli.limit_of_diagonal(N) != moduli.point_R(N):
                return False, f"N={N}"
            for r in range(1, N + 1):
                for I in combinations(range(1, N + 1), r):
                    if moduli.zdiv_residue(N, I) != Fraction(len(I), N):
                        return False, f"zdiv N={N} I={I}"
        return True, ""

    return [
        _check("shuffle sizes are binomial", shuffle_counts),
        _check("ordered surjection counts", stuffle_counts),
        _check("regularization base cases", base_cases),
        _check("regularization relation up to weight 5", regularization_relation),
        _check("weight 3 relations vanish numerically", weight3_relations),
        _check("zeta(2) = pi^2/6", zeta_two),
        _check("p-adic Li_1(7) = -log(1-7)", padic_li1),
        _check("KZ associator passes DMR0 at degree 4", kz_dmr),
        _check("boundary divisor counts", divisor_counts),
        _check("point R and divisor residues", point_r),
    ]
