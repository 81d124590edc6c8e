"""Double shuffle relation generation and exact linear algebra over Q."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

from .errors import UnevaluatableT
from .regularization import l_map, reg_integral, reg_series
from .symbols import Poly, format_monomial, monomial_key, monomial_weight
from .words import (
    Index,
    compositions,
    format_index,
    index_to_word,
    is_admissible,
    shuffle,
    stuffle,
    word_stuffle,
    words_of_weight,
)


@dataclass
class Relation:
    """A T-free homogeneous polynomial asserted to vanish on MZVs."""

    weight: int
    combination: Poly
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "combination": self.combination.to_json(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Relation":
        return cls(data["weight"], Poly.from_json(data["combination"]), dict(data["provenance"]))

    def __str__(self) -> str:
        return f"{self.combination} = 0"


def _split_by_t(value: Poly, weight: int, provenance: dict) -> list[Relation]:
    out = []
    for j in range(value.t_degree() + 1):
        coeff = value.t_coefficient(j)
        if coeff:
            out.append(Relation(weight - j, coeff, dict(provenance, t_power=j)))
    return out


def pair_relation(a: Index, b: Index) -> Poly:
    """(shuffle product defect) - (stuffle product defect) for the pair (a, b).

    Each defect vanishes on MZVs; their difference has the quadratic
    terms cancelled, so the result is linear in the generators.
    """
    wa, wb = index_to_word(a), index_to_word(b)
    sh = Poly()
    for w, c in shuffle(wa, wb).items():
        sh = sh + reg_integral(w) * c
    st = Poly()
    for idx, c in stuffle(a, b).items():
        st = st + reg_series(idx) * c
    return (sh - reg_integral(wa) * reg_integral(wb)) - (st - reg_series(a) * reg_series(b))


def comparison_relation(index: Index) -> Poly:
    return reg_series(index) - l_map(reg_integral(index_to_word(index)))


def index_pairs(weight: int) -> list[tuple[Index, Index]]:
    """Unordered pairs of nonempty indices of total weight ``weight``."""
    out = []
    for wa in range(1, weight // 2 + 1):
        for a in compositions(wa):
            for b in compositions(weight - wa):
                if wa == weight - wa and b < a:
                    continue
                out.append((a, b))
    return out


def generate_double_shuffle(weight: int, seed: int | None = None) -> list[Relation]:
    """Pair relations plus comparison relations at one weight, split by T-power.

    ``seed`` permutes the generation order (the row space does not depend on it).
    """
    if weight < 2:
        raise ValueError("weight must be at least 2")
    tasks: list = [("pair", p) for p in index_pairs(weight)]
    tasks += [("regularization", c) for c in compositions(weight) if not is_admissible(c)]
    if seed is not None:
        random.Random(seed).shuffle(tasks)
    out: list[Relation] = []
    for kind, item in tasks:
        if kind == "pair":
            a, b = item
            value = pair_relation(a, b)
            prov = {"mechanism": "shuffle-minus-stuffle", "pair": [format_index(a), format_index(b)]}
        else:
            value = comparison_relation(item)
            prov = {"mechanism": "regularization", "index": format_index(item)}
        out.extend(_split_by_t(value, weight, prov))
    return out


# ---------------------------------------------------------------------------
# matrices and exact elimination


@dataclass
class RelationMatrix:
    columns: list  # monomial keys (monomial, t_power)
    rows: list[list[Fraction]]
    relations: list[Relation]

    @classmethod
    def from_relations(cls, relations: Sequence[Relation], extra_columns: Iterable = ()) -> "RelationMatrix":
        keys = set(extra_columns)
        for r in relations:
            keys.update(r.combination)
        columns = sorted(keys, key=lambda k: (k[1], monomial_key(k[0])))
        pos = {k: i for i, k in enumerate(columns)}
        rows = []
        for r in relations:
            row = [Fraction(0)] * len(columns)
            for k, c in r.combination.items():
                row[pos[k]] = c
            rows.append(row)
        return cls(columns, rows, list(relations))

    def row_to_poly(self, row: Sequence[Fraction]) -> Poly:
        return Poly({k: c for k, c in zip(self.columns, row) if c})


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        d = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * d) for x in row])
    return out


def bareiss_echelon(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (nonzero rows, pivot columns)."""
    m = _integer_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    prev = 1
    r = 0
    pivots = []
    for col in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][col]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][col]
        for i in range(r + 1, len(m)):
            f = m[i][col]
            row_i = m[i]
            row_r = m[r]
            for j in range(col + 1, ncols):
                row_i[j] = (row_i[j] * piv - f * row_r[j]) // prev
            row_i[col] = 0
        prev = piv
        pivots.append(col)
        r += 1
    return m[:r], pivots


def reduced_echelon(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    echelon, pivots = bareiss_echelon(rows)
    red = [[Fraction(x) for x in row] for row in echelon]
    for i in range(len(red) - 1, -1, -1):
        col = pivots[i]
        inv = 1 / red[i][col]
        red[i] = [x * inv for x in red[i]]
        for k in range(i):
            f = red[k][col]
            if f:
                red[k] = [a - f * b for a, b in zip(red[k], red[i])]
    return red, pivots


def rank_and_nullspace(matrix: RelationMatrix) -> tuple[int, list[Relation]]:
    """Rank of the relation matrix and its reduced echelon rows as relations."""
    red, _ = reduced_echelon(matrix.rows)
    basis = []
    for row in red:
        poly = matrix.row_to_poly(row)
        w = next(iter(poly.weights()))
        basis.append(Relation(w, poly, {"mechanism": "basis"}))
    return len(red), basis


class Span:
    """Row space of a set of T-free polynomials, for membership tests."""

    def __init__(self, polys: Iterable[Poly]):
        polys = [p for p in polys if p]
        keys = set()
        for p in polys:
            keys.update(p)
        self.columns = sorted(keys, key=lambda k: (k[1], monomial_key(k[0])))
        self._pos = {k: i for i, k in enumerate(self.columns)}
        rows = []
        for p in polys:
            row = [Fraction(0)] * len(self.columns)
            for k, c in p.items():
                row[self._pos[k]] = c
            rows.append(row)
        self.rows, self.pivots = reduced_echelon(rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list[Poly]:
        return [Poly({k: c for k, c in zip(self.columns, row) if c}) for row in self.rows]

    def reduce(self, poly: Poly) -> Poly:
        rest = dict(poly.items())
        for row, col in zip(self.rows, self.pivots):
            c = rest.get(self.columns[col])
            if c:
                for k, x in zip(self.columns, row):
                    if x:
                        rest[k] = rest.get(k, 0) - c * x
        return Poly(rest)

    def contains(self, poly: Poly) -> bool:
        return not self.reduce(poly)


def relation_span(relations: Sequence[Relation]) -> Span:
    return Span(r.combination for r in relations)


# ---------------------------------------------------------------------------
# regularized double shuffle ideal (independent presentation)


def linearize(poly: Poly) -> Poly:
    """Rewrite products of generators as sums of generators via the shuffle product."""
    out = Poly()
    for (mono, t), c in poly.items():
        factors = [index for index, e in mono for _ in range(e)]
        out = out + _linear_product(tuple(sorted(factors))) * Poly.T(t) * c
    return out


@lru_cache(maxsize=None)
def _linear_product(factors: tuple) -> Poly:
    if not factors:
        return Poly.const(1)
    if len(factors) == 1:
        return Poly.zeta(factors[0])
    rest = _linear_product(factors[1:])
    return multiply_linear(factors[0], rest)


def multiply_linear(index: Index, linear: Poly) -> Poly:
    """Linearized product ζ(index) * (linear combination of generators)."""
    out = Poly()
    w = index_to_word(index)
    for (mono, t), c in linear.items():
        if not mono:
            out = out + Poly.zeta(index) * Poly.T(t) * c
            continue
        ((other, _),) = mono
        acc = Poly()
        for word, k in shuffle(w, index_to_word(other)).items():
            acc = acc + reg_integral(word) * k
        out = out + acc * Poly.T(t) * c
    return out


def eds_generators(weight: int) -> list[Poly]:
    """T-coefficients of reg_I(w1 ⧢ w0 - w1 * w0), w1 ending in B, w0 admissible."""
    out = []
    for k1 in range(1, weight - 1):
        w1s = [w for w in words_of_weight(k1) if w.endswith("B")]
        w0s = [w for w in words_of_weight(weight - k1) if w.startswith("A") and w.endswith("B")]
        for w1 in w1s:
            for w0 in w0s:
                value = Poly()
                for w, c in shuffle(w1, w0).items():
                    value = value + reg_integral(w) * c
                for w, c in word_stuffle(w1, w0).items():
                    value = value - reg_integral(w) * c
                out.extend(value.t_coefficients())
    return [p for p in out if p]


class RelationIdeal:
    """Linear parts of the ideal generated by the regularized double shuffle relations.

    The ideal lives in the free commutative ring on admissible symbols; shuffle
    product relations let every element be linearized, so membership at a
    fixed weight reduces to span membership.
    """

    def __init__(self, max_weight: int):
        self.max_weight = max_weight
        gens: dict[int, list[Poly]] = {w: [] for w in range(2, max_weight + 1)}
        for w in range(3, max_weight + 1):
            for p in eds_generators(w):
                gens[next(iter(p.weights()))].append(p)
        self.spans: dict[int, Span] = {}
        for w in range(2, max_weight + 1):
            for lower in range(2, w - 1):
                for b in self.spans[lower].basis():
                    for a in compositions(w - lower):
                        if is_admissible(a):
                            gens[w].append(multiply_linear(a, b))
            self.spans[w] = Span(gens[w])

    def contains(self, poly: Poly) -> bool:
        lin = linearize(poly)
        by_weight: dict[int, dict] = {}
        for (mono, t), c in lin.items():
            if t:
                return False
            by_weight.setdefault(monomial_weight(mono), {})[(mono, t)] = c
        for w, terms in by_weight.items():
            if w < 2 or w > self.max_weight:
                return False
            if not self.spans[w].contains(Poly(terms)):
                return False
        return True

    def rank(self, weight: int) -> int:
        return self.spans[weight].rank


@lru_cache(maxsize=None)
def _ideal(max_weight: int) -> RelationIdeal:
    return RelationIdeal(max_weight)


def ideal_for_weight(weight: int) -> RelationIdeal:
    return _ideal(max(weight, 2))


# ---------------------------------------------------------------------------
# numeric verification


@dataclass
class NumericReport:
    max_residual: float
    residuals: list[float]
    digits: int

    def to_json(self) -> dict:
        return {"max_residual": self.max_residual, "residuals": self.residuals, "digits": self.digits}


def verify_relations_numeric(relations: Sequence[Relation], digits: int = 30) -> NumericReport:
    from .numeric import mzv_table

    if not relations:
        return NumericReport(0.0, [], digits)
    for r in relations:
        if not r.combination.is_t_free():
            raise UnevaluatableT(f"relation retains T: {r.combination}")
    top = max(max(r.combination.weights(), default=0) for r in relations)
    table = mzv_table(top, digits)
    residuals = [abs(float(r.combination.evaluate(table.__getitem__))) for r in relations]
    return NumericReport(max(residuals), residuals, digits)


def format_relation_text(r: Relation) -> str:
    prov = r.provenance
    tag = prov.get("mechanism", "")
    if "pair" in prov:
        tag += " " + "*".join(prov["pair"])
    if "index" in prov:
        tag += " " + prov["index"]
    if "t_power" in prov:
        tag += f" [T^{prov['t_power']}]"
    return f"{r.combination} = 0    ({tag})"
