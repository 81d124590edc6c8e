"""Polynomials in T over the ring of formal MZV symbols.

Generators are admissible indices (one free symbol ``ζ(index)`` each); ``T``
has weight 1.  A term key is ``(monomial, t_power)`` where ``monomial`` is a
sorted tuple of ``(index, exponent)`` pairs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .errors import NonAdmissible, UnevaluatableT
from .words import Index, format_index, is_admissible, parse_index

Monomial = tuple  # tuple[tuple[Index, int], ...]


def monomial_weight(mono: Monomial) -> int:
    return sum(sum(index) * e for index, e in mono)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for index, e in b:
        acc[index] = acc.get(index, 0) + e
    return tuple(sorted(acc.items()))


def monomial_key(mono: Monomial) -> tuple:
    """Graded lexicographic sort key."""
    return (monomial_weight(mono), tuple((len(i), i, -e) for i, e in mono))


def format_monomial(mono: Monomial) -> str:
    if not mono:
        return "1"
    parts = []
    for index, e in mono:
        sym = "ζ" + format_index(index)
        parts.append(sym if e == 1 else f"{sym}^{e}")
    return "*".join(parts)


class Poly:
    """Immutable element of SymbolRing[T] with exact rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            acc[key] = acc.get(key, 0) + c
        self._terms = {k: Fraction(c) for k, c in acc.items() if c}

    # constructors -------------------------------------------------------

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({((), 0): c})

    @classmethod
    def zeta(cls, index: Index) -> "Poly":
        index = tuple(index)
        if not index:
            return cls.const(1)
        if not is_admissible(index):
            raise NonAdmissible(f"{format_index(index)} is not admissible")
        return cls({(((index, 1),), 0): 1})

    @classmethod
    def T(cls, power: int = 1) -> "Poly":
        return cls({((), power): 1})

    @classmethod
    def lift(cls, x) -> "Poly":
        return x if isinstance(x, Poly) else cls.const(x)

    # arithmetic ---------------------------------------------------------

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other) -> "Poly":
        other = Poly.lift(other)
        return Poly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.lift(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.lift(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly({k: v * c for k, v in self._terms.items()})
        acc: dict = {}
        for (ma, ta), ca in self._terms.items():
            for (mb, tb), cb in other._terms.items():
                key = (monomial_mul(ma, mb), ta + tb)
                acc[key] = acc.get(key, 0) + ca * cb
        return Poly(acc)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        return self * (1 / Fraction(other))

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        try:
            return self._terms == Poly.const(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # structure ----------------------------------------------------------

    def t_degree(self) -> int:
        return max((t for _, t in self._terms), default=0)

    def t_coefficient(self, j: int) -> "Poly":
        """Coefficient of T^j, a T-free polynomial."""
        return Poly({(m, 0): c for (m, t), c in self._terms.items() if t == j})

    def t_coefficients(self) -> list["Poly"]:
        return [self.t_coefficient(j) for j in range(self.t_degree() + 1)]

    def is_t_free(self) -> bool:
        return all(t == 0 for _, t in self._terms)

    def weights(self) -> set[int]:
        return {monomial_weight(m) + t for m, t in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def substitute_t(self, value) -> "Poly":
        """Replace T by a polynomial or a rational."""
        value = Poly.lift(value)
        out = Poly()
        for (m, t), c in self._terms.items():
            out = out + Poly({(m, 0): c}) * value**t
        return out

    def at_t_zero(self) -> "Poly":
        return self.t_coefficient(0)

    def map_coefficients(self, f: Callable[[Monomial, int], "Poly"]) -> "Poly":
        out = Poly()
        for (m, t), c in self._terms.items():
            out = out + f(m, t) * c
        return out

    def evaluate(self, zeta: Callable[[Index], object], t=None):
        """Numeric value with ``zeta(index)`` supplying generator values.

        Raises UnevaluatableT if T occurs and no value for T was given.
        """
        total = 0
        for (m, tp), c in self._terms.items():
            if tp and t is None:
                raise UnevaluatableT("expression still contains T")
            term = c.numerator
            for index, e in m:
                term = term * zeta(index) ** e
            if tp:
                term = term * t**tp
            if isinstance(term, (int, Fraction)):
                total = total + Fraction(term) / c.denominator
            else:
                total = total + term / c.denominator
        return total

    # presentation -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[Monomial, int], Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: (kv[0][1], monomial_key(kv[0][0])))

    def to_json(self) -> list[dict]:
        out = []
        for (m, t), c in self.sorted_terms():
            out.append(
                {
                    "t_power": t,
                    "monomial": [[format_index(i), e] for i, e in m],
                    "coefficient": _frac_str(c),
                }
            )
        return out

    @classmethod
    def from_json(cls, items) -> "Poly":
        terms = []
        for item in items:
            mono = tuple(sorted((parse_index(i), int(e)) for i, e in item["monomial"]))
            terms.append(((mono, int(item["t_power"])), Fraction(item["coefficient"])))
        return cls(terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (m, t), c in sorted(
            self._terms.items(), key=lambda kv: (-kv[0][1], monomial_key(kv[0][0]))
        ):
            factors = []
            if t:
                factors.append("T" if t == 1 else f"T^{t}")
            if m:
                factors.append(format_monomial(m))
            body = "*".join(factors)
            if not body:
                parts.append(_frac_str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{_frac_str(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


ZERO = Poly()
ONE = Poly.const(1)
