from fractions import Fraction
from itertools import combinations, product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dblshuffle.errors import ArityMismatch, WordEndsInA
from dblshuffle.words import (
    Combination,
    OrderedSurjection,
    combination_from_json,
    compositions,
    contract_variables,
    count_ordered_surjections,
    enumerate_ordered_surjections,
    format_index,
    index_to_word,
    is_admissible,
    parse_index,
    shuffle,
    stuffle,
    stuffle_contract,
    word_stuffle,
    word_to_index,
    words_of_weight,
)

words = st.text(alphabet="AB", max_size=5)
indices = st.lists(st.integers(1, 3), max_size=3).map(tuple)


def brute_shuffle(u, v):
    # choose the positions of u's letters among len(u)+len(v) slots
    out = {}
    n = len(u) + len(v)
    for pos in combinations(range(n), len(u)):
        it_u, it_v = iter(u), iter(v)
        w = "".join(next(it_u) if i in pos else next(it_v) for i in range(n))
        out[w] = out.get(w, 0) + 1
    return Combination(out)


def brute_surjections(r, s):
    out = set()
    for n in range(max(r, s), r + s + 1):
        for a in product(range(1, n + 1), repeat=r + s):
            try:
                OrderedSurjection(r, s, n, a)
            except ValueError:
                continue
            out.add(a)
    return out


def truncated_sum(index, K):
    # Σ_{0<k1<...<km<=K} Π k_i^(-n_i), exactly
    m = len(index)
    if m == 0:
        return Fraction(1)
    total = Fraction(0)
    for ks in combinations(range(1, K + 1), m):
        term = Fraction(1)
        for k, n in zip(ks, index):
            term /= k**n
        total += term
    return total


def test_word_convention():
    assert index_to_word((2,)) == "AB"
    assert index_to_word((1, 2)) == "ABB"
    assert word_to_index("ABB") == (1, 2)
    assert is_admissible((1, 2)) and not is_admissible((2, 1))
    with pytest.raises(WordEndsInA):
        word_to_index("BA")


@given(indices)
def test_index_word_round_trip(index):
    assert word_to_index(index_to_word(index)) == index
    assert parse_index(format_index(index)) == index


def test_admissible_iff_word_starts_with_a():
    for n in range(1, 7):
        for c in compositions(n):
            assert is_admissible(c) == index_to_word(c).startswith("A")


@given(words, words)
def test_shuffle_matches_position_enumeration(u, v):
    assert shuffle(u, v) == brute_shuffle(u, v)
    assert shuffle(u, v).mass() == comb(len(u) + len(v), len(u))


@given(words, words, words)
@settings(max_examples=40)
def test_shuffle_commutative_associative(u, v, w):
    assert shuffle(u, v) == shuffle(v, u)
    assert shuffle(shuffle(u, v), w) == shuffle(u, shuffle(v, w))


@pytest.mark.parametrize("r,s", [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (1, 4)])
def test_ordered_surjections_match_brute_force(r, s):
    ours = {x.assignment for x in enumerate_ordered_surjections(r, s)}
    assert ours == brute_surjections(r, s)
    assert len(ours) == count_ordered_surjections(r, s)


def test_ordered_surjection_validation():
    with pytest.raises(ValueError):
        OrderedSurjection(2, 1, 2, (2, 1, 1))
    with pytest.raises(ValueError):
        OrderedSurjection(1, 1, 3, (1, 2))


def test_stuffle_small_example():
    # ζ(a)ζ(b) = ζ(a,b) + ζ(b,a) + ζ(a+b)
    assert stuffle((2,), (3,)) == Combination({(2, 3): 1, (3, 2): 1, (5,): 1})


@given(indices, indices)
@settings(max_examples=40, deadline=None)
def test_stuffle_matches_truncated_nested_sums(a, b):
    # the stuffle identity holds exactly for sums truncated at any K
    K = 5
    lhs = truncated_sum(a, K) * truncated_sum(b, K)
    rhs = sum((c * truncated_sum(i, K) for i, c in stuffle(a, b).items()), Fraction(0))
    assert lhs == rhs


@given(indices, indices, indices)
@settings(max_examples=30, deadline=None)
def test_stuffle_commutative_associative(a, b, c):
    assert stuffle(a, b) == stuffle(b, a)
    assert stuffle(stuffle(a, b), c) == stuffle(a, stuffle(b, c))


def test_contractions_and_arity():
    sigma = OrderedSurjection(2, 1, 2, (1, 2, 2))
    assert stuffle_contract(sigma, (1, 2), (3,)) == (1, 5)
    assert contract_variables(sigma, ("x", 2), (3,)) == ("x", 6)
    with pytest.raises(ArityMismatch):
        stuffle_contract(sigma, (1,), (3,))


def test_word_stuffle_transport():
    assert word_stuffle("AB", "B") == stuffle((2,), (1,)).map_keys(index_to_word)


def test_combination_json_round_trip():
    c = shuffle("AB", "B").scale(Fraction(3, 2))
    data = c.to_json(lambda w: w)
    assert combination_from_json(data, lambda s: s) == c


def test_words_of_weight_count():
    for n in range(0, 7):
        assert len(list(words_of_weight(n))) == 2**n
