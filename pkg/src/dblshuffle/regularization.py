"""Integral and series regularization, and the comparison map L."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

from .symbols import ONE, Poly
from .words import (
    Index,
    Word,
    check_index,
    check_word,
    format_index,
    index_to_word,
    is_admissible,
    shuffle,
    stuffle,
    word_to_index,
)
from .errors import WordEndsInA


@lru_cache(maxsize=None)
def reg_integral(word: Word) -> Poly:
    """Shuffle-regularized value: admissible words are generators, B is -T."""
    check_word(word)
    if word.endswith("A"):
        raise WordEndsInA(f"word {word!r} ends with A")
    if not word:
        return ONE
    a = len(word) - len(word.lstrip("B"))
    if a == 0:
        return Poly.zeta(word_to_index(word))
    if word == "B":
        return -Poly.T()
    # B ⧢ B^(a-1)v = a * B^a v + terms with fewer leading B's
    rest = word[1:]
    total = reg_integral("B") * reg_integral(rest)
    for w, c in shuffle("B", rest).items():
        if w != word:
            total = total - reg_integral(w) * c
    return total / a


@lru_cache(maxsize=None)
def reg_series(index: Index) -> Poly:
    """Stuffle-regularized value: admissible indices are generators, (1) is -T."""
    index = check_index(index)
    if is_admissible(index):
        return Poly.zeta(index)
    if index == (1,):
        return -Poly.T()
    # (1) * (n.., 1^(l-1)) = l * (n.., 1^l) + terms with fewer trailing ones
    base = index[:-1]
    ones = len(index) - len(tuple(_strip_trailing_ones(index)))
    total = reg_series((1,)) * reg_series(base)
    for c_index, c in stuffle((1,), base).items():
        if c_index != index:
            total = total - reg_series(c_index) * c
    return total / ones


def _strip_trailing_ones(index: Index) -> Index:
    end = len(index)
    while end and index[end - 1] == 1:
        end -= 1
    return index[:end]


def zeta_integral(n: int) -> Poly:
    """ζ^I(n): -T for n = 1, the generator ζ(n) otherwise."""
    return reg_integral(index_to_word((n,)))


@lru_cache(maxsize=None)
def l_of_t_power(n: int) -> Poly:
    """L(T^n) = n! [u^n] exp(-Σ_k ζ^I(k) u^k / k)."""
    # f = exp(g) with g_k = -ζ^I(k)/k satisfies m f_m = Σ_k k g_k f_(m-k)
    f = [ONE]
    for m in range(1, n + 1):
        acc = Poly()
        for k in range(1, m + 1):
            acc = acc - zeta_integral(k) * f[m - k]
        f.append(acc / m)
    return f[n] * factorial(n)


def l_map(value: Poly) -> Poly:
    """SymbolRing-linear map sending T^n to L(T^n)."""
    out = Poly()
    for j in range(value.t_degree() + 1):
        coeff = value.t_coefficient(j)
        if coeff:
            out = out + coeff * l_of_t_power(j)
    return out


@dataclass
class RegularizationReport:
    """Outcome of comparing both regularizations of one index.

    ``identical`` is equality with every admissible index treated as a free
    symbol.  ``holds`` is equality in the MZV algebra as presented by the
    independently generated regularized double shuffle relations (see
    :mod:`dblshuffle.relations`); this is the meaningful statement, since
    already at (2,1) the two sides differ by ζ(1,2) - ζ(3).
    """

    index: Index
    series: Poly
    integral: Poly
    compared: Poly
    difference: Poly
    identical: bool
    holds: bool
    numeric_residual: float | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = {
            "index": format_index(self.index),
            "series": self.series.to_json(),
            "integral": self.integral.to_json(),
            "compared": self.compared.to_json(),
            "difference": self.difference.to_json(),
            "identical": self.identical,
            "holds": self.holds,
        }
        if self.numeric_residual is not None:
            out["numeric_residual"] = self.numeric_residual
        return out


def check_regularization_relation(index: Index, digits: int | None = None) -> RegularizationReport:
    """Compare reg_series(index) with L(reg_integral(word(index))).

    With ``digits`` set, also report the numeric residual of each
    T-coefficient after substituting numeric MZVs.
    """
    from .relations import ideal_for_weight

    index = check_index(index)
    series = reg_series(index)
    integral = reg_integral(index_to_word(index))
    compared = l_map(integral)
    diff = series - compared
    ideal = ideal_for_weight(sum(index))
    holds = all(ideal.contains(diff.t_coefficient(j)) for j in range(diff.t_degree() + 1))
    residual = None
    if digits is not None:
        from .numeric import mzv_table

        values = mzv_table(sum(index), digits)
        residual = max(
            (abs(float(c.evaluate(values.__getitem__))) for c in diff.t_coefficients()),
            default=0.0,
        )
    return RegularizationReport(
        index=index,
        series=series,
        integral=integral,
        compared=compared,
        difference=diff,
        identical=not diff,
        holds=holds,
        numeric_residual=residual,
    )
