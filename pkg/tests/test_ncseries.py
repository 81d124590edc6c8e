from fractions import Fraction

import pytest

from dblshuffle.errors import BadConstantTerm, TruncationMismatch, UnsupportedDegree
from dblshuffle.ncseries import (
    NCSeries,
    check_dmr0,
    g_star,
    is_grouplike,
    is_grouplike_star,
    is_primitive,
    kz_associator,
    nc_exp,
    nc_log,
    pi_y,
)
from dblshuffle.numeric import mzv_table
from dblshuffle.regularization import reg_integral
from dblshuffle.words import compositions, index_to_word, stuffle

D = 6


def letter(x, degree=D):
    return NCSeries.letter(x, degree)


def bracket(f, g):
    return f * g - g * f


def random_lie(rng, degree=D):
    A, B = letter("A", degree), letter("B", degree)
    gens = [A, B, bracket(A, B), bracket(A, bracket(A, B)), bracket(B, bracket(A, B)), bracket(A, bracket(A, bracket(A, B)))]
    out = NCSeries(degree)
    for g in gens:
        out = out + g.scale(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    return out


def stuffle_defects(h, degree):
    # c(u)c(v) - Σ_{w in u*v} c(w) over nonempty y-words with |u|+|v| <= degree
    keys = [c for n in range(1, degree + 1) for c in compositions(n)]
    out = {}
    for u in keys:
        for v in keys:
            if sum(u) + sum(v) > degree:
                continue
            total = sum(h.coefficient(w, 0) * k for w, k in stuffle(u, v).items())
            out[(u, v)] = h.coefficient(u, 0) * h.coefficient(v, 0) - total
    return out


def test_exp_log_inverse(rng):
    for _ in range(5):
        f = random_lie(rng)
        assert nc_log(nc_exp(f)) == f


def test_lie_elements_primitive_and_exponentials_grouplike(rng):
    for _ in range(5):
        f = random_lie(rng)
        assert is_primitive(f).ok
        g = nc_exp(f)
        assert is_grouplike(g).ok
        assert is_grouplike(g, method="shuffle").ok


def test_non_grouplike_detected():
    g = NCSeries.one(3) + letter("A", 3) * letter("B", 3)
    assert not is_grouplike(g).ok
    assert not is_grouplike(g, method="shuffle").ok
    assert not is_primitive(letter("A", 3) * letter("B", 3)).ok


def test_degree_and_constant_checks():
    with pytest.raises(TruncationMismatch):
        letter("A", 3) * letter("B", 4)
    with pytest.raises(BadConstantTerm):
        NCSeries.one(3).exp()
    with pytest.raises(BadConstantTerm):
        letter("A", 3).log()
    with pytest.raises(UnsupportedDegree):
        kz_associator(0)


def test_pi_y_layout():
    g = NCSeries(4, {"AB": 2, "BAB": 3, "BA": 5, "AABB": 7})
    h = pi_y(g)
    assert h.coeffs == {(2,): 2, (1, 2): 3, (3, 1): 7}


def test_kz_coefficients_are_signed_regularized_values():
    phi = kz_associator(5, "complex", 30)
    table = mzv_table(5, 30)
    for n in range(2, 6):
        for c in compositions(n):
            w = index_to_word(c)
            expected = reg_integral(w).at_t_zero().evaluate(table.__getitem__) * (-1) ** len(c)
            assert abs(phi.coefficient(w) - expected) < 1e-40


def test_kz_grouplike():
    assert is_grouplike(kz_associator(5, "complex", 30), tol=1e-20).ok


def test_kz_in_dmr0():
    rep = check_dmr0(kz_associator(5, "complex", 30).substitute_b_sign(), tol=1e-15)
    assert rep.condition1 and rep.condition2 and rep.condition3


def test_star_check_agrees_with_stuffle_identity():
    phi = kz_associator(5, "complex", 30).substitute_b_sign()
    h = g_star(phi)
    assert is_grouplike_star(h, 1e-15).ok
    assert max(abs(d) for d in stuffle_defects(h, 5).values()) < 1e-15


@pytest.mark.parametrize("alpha,beta", [(0, 0), (0, 3), (Fraction(-2, 5), 0)])
def test_exponentials_of_one_letter_satisfy_both_shuffles(alpha, beta):
    g = nc_exp(NCSeries(D, {"A": alpha, "B": beta}))
    rep = check_dmr0(g)
    assert rep.condition2 and rep.condition3
    assert rep.condition1 == (alpha == 0 and beta == 0)


def test_exponential_of_two_letters_breaks_stuffle(rng):
    # the coproduct check and the direct stuffle identity must agree
    for _ in range(5):
        alpha = Fraction(rng.randint(1, 9), rng.randint(1, 5)) * rng.choice([1, -1])
        beta = Fraction(rng.randint(1, 9), rng.randint(1, 5)) * rng.choice([1, -1])
        g = nc_exp(NCSeries(D, {"A": alpha, "B": beta}))
        rep = check_dmr0(g)
        defects = stuffle_defects(g_star(g), D)
        assert rep.condition2
        assert not rep.condition3
        assert any(defects.values())
        # by hand: g_* has c(y1) = 2β, c(y2) = αβ/2, c(y1y2) = 2αβ²/3,
        # c(y2y1) = αβ²/6, c(y3) = α²β/6
        assert defects[((1,), (2,))] == alpha * beta * (beta - alpha) / 6
