"""Words over {A, B}, indices, shuffle and stuffle products.

A word is a plain ``str`` over the letters ``"A"`` and ``"B"``; an index is a
``tuple`` of positive ints.  The index ``(k1, ..., kl)`` corresponds to the
word ``A^(kl-1) B ... A^(k1-1) B``: blocks are read in reversed index order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence, TypeVar

from .errors import ArityMismatch, WordEndsInA

Word = str
Index = tuple

K = TypeVar("K")


# ---------------------------------------------------------------------------
# basic invariants


def weight(x: Word | Index) -> int:
    if isinstance(x, str):
        return len(x)
    return sum(x)


def depth(x: Word | Index) -> int:
    if isinstance(x, str):
        return x.count("B")
    return len(x)


def is_admissible(index: Index) -> bool:
    """Last entry at least 2; the empty index counts as admissible."""
    return not index or index[-1] >= 2


def check_word(word: str) -> Word:
    if any(c not in "AB" for c in word):
        raise ValueError(f"not a word over {{A,B}}: {word!r}")
    return word


def check_index(index: Iterable[int]) -> Index:
    index = tuple(int(k) for k in index)
    if any(k < 1 for k in index):
        raise ValueError(f"index entries must be positive: {index}")
    return index


_INDEX_RE = re.compile(r"^\s*\(?\s*([0-9,\s]*)\)?\s*$")


def parse_index(text: str) -> Index:
    """Parse ``"(1,2)"``, ``"1,2"`` or ``"()"``."""
    m = _INDEX_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse index {text!r}")
    body = m.group(1).strip()
    if not body:
        return ()
    return check_index(int(part) for part in body.split(","))


def format_index(index: Index) -> str:
    return "(" + ",".join(str(k) for k in index) + ")"


def index_to_word(index: Index) -> Word:
    return "".join("A" * (k - 1) + "B" for k in reversed(index))


def word_to_index(word: Word) -> Index:
    if word.endswith("A"):
        raise WordEndsInA(f"word {word!r} ends with A")
    blocks = word.split("B")[:-1]
    return tuple(len(b) + 1 for b in reversed(blocks))


def words_of_weight(n: int) -> Iterator[Word]:
    for letters in product("AB", repeat=n):
        yield "".join(letters)


def compositions(n: int) -> Iterator[Index]:
    """All indices of weight n (2^(n-1) of them for n >= 1)."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def indices_up_to(max_weight: int, min_weight: int = 1) -> Iterator[Index]:
    for n in range(min_weight, max_weight + 1):
        yield from compositions(n)


# ---------------------------------------------------------------------------
# linear combinations


class Combination(Mapping[K, Fraction]):
    """Finite formal sum with exact rational coefficients; zero terms dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[K, object] | Iterable[tuple[K, object]] = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            acc[key] = acc.get(key, 0) + Fraction(c)
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def single(cls, key: K, coefficient: object = 1) -> "Combination[K]":
        return cls({key: coefficient})

    def __getitem__(self, key: K) -> Fraction:
        return self._terms[key]

    def coefficient(self, key: K) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "Combination[K]") -> "Combination[K]":
        return type(self)(list(self._terms.items()) + list(other.items()))

    def __sub__(self, other: "Combination[K]") -> "Combination[K]":
        return self + other.scale(-1)

    def __neg__(self) -> "Combination[K]":
        return self.scale(-1)

    def scale(self, c: object) -> "Combination[K]":
        c = Fraction(c)
        return type(self)({k: v * c for k, v in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Combination):
            return self._terms == other._terms
        if isinstance(other, Mapping):
            return self._terms == Combination(other)._terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def mass(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def map_keys(self, f: Callable[[K], object]) -> "Combination":
        return Combination((f(k), c) for k, c in self._terms.items())

    def to_json(self, fmt: Callable[[K], str]) -> list[dict]:
        return [
            {"coefficient": _frac_str(c), "term": fmt(k)}
            for k, c in sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))
        ]

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0])):
            label = format_index(k) if isinstance(k, tuple) else (k or "1")
            parts.append(f"{_frac_str(c)}*{label}")
        return " + ".join(parts)


def _sort_key(key) -> tuple:
    return (weight(key), depth(key), key)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def combination_from_json(items: Sequence[Mapping], parse: Callable[[str], K]) -> Combination:
    return Combination((parse(item["term"]), Fraction(item["coefficient"])) for item in items)


WordCombination = Combination
IndexCombination = Combination


# ---------------------------------------------------------------------------
# shuffle


@lru_cache(maxsize=None)
def _shuffle_words(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: dict[Word, int] = {}
    for w, c in _shuffle_words(u[1:], v):
        acc[u[0] + w] = acc.get(u[0] + w, 0) + c
    for w, c in _shuffle_words(u, v[1:]):
        acc[v[0] + w] = acc.get(v[0] + w, 0) + c
    return tuple(sorted(acc.items()))


def shuffle(u: Word | Combination, v: Word | Combination) -> Combination:
    """Shuffle product, bilinear in combinations."""
    if isinstance(u, str) and isinstance(v, str):
        return Combination(_shuffle_words(check_word(u), check_word(v)))
    left = Combination.single(u) if isinstance(u, str) else u
    right = Combination.single(v) if isinstance(v, str) else v
    acc: list = []
    for a, ca in left.items():
        for b, cb in right.items():
            acc.extend((w, ca * cb * c) for w, c in _shuffle_words(a, b))
    return Combination(acc)


# ---------------------------------------------------------------------------
# ordered surjections and the stuffle product


@dataclass(frozen=True)
class OrderedSurjection:
    """Onto map {1..r+s} -> {1..N}, strictly increasing on {1..r} and on {r+1..r+s}.

    ``assignment[j]`` is the image of ``j + 1``.
    """

    r: int
    s: int
    target_size: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        a, r, s, n = self.assignment, self.r, self.s, self.target_size
        if len(a) != r + s or sorted(set(a)) != list(range(1, n + 1)):
            raise ValueError(f"not an onto map to {{1..{n}}}: {a}")
        if any(a[i] >= a[i + 1] for i in range(r - 1)) or any(
            a[i] >= a[i + 1] for i in range(r, r + s - 1)
        ):
            raise ValueError(f"chain condition violated: {a}")

    def fibers(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.target_size)]
        for j, image in enumerate(self.assignment, start=1):
            out[image - 1].append(j)
        return [tuple(f) for f in out]


@lru_cache(maxsize=None)
def _surjection_assignments(r: int, s: int) -> tuple[tuple[int, ...], ...]:
    # walk both chains in step; at each target slot take the next left
    # element, the next right element, or both
    out = []

    def walk(i: int, j: int, slot: int, left: list[int], right: list[int]):
        if i == r and j == s:
            out.append(tuple(left + right))
            return
        if i < r:
            walk(i + 1, j, slot + 1, left + [slot], right)
        if j < s:
            walk(i, j + 1, slot + 1, left, right + [slot])
        if i < r and j < s:
            walk(i + 1, j + 1, slot + 1, left + [slot], right + [slot])

    walk(0, 0, 1, [], [])
    return tuple(out)


def enumerate_ordered_surjections(r: int, s: int) -> list[OrderedSurjection]:
    if r < 1 or s < 1:
        raise ValueError("r and s must be positive")
    return [OrderedSurjection(r, s, max(a), a) for a in _surjection_assignments(r, s)]


def count_ordered_surjections(r: int, s: int) -> int:
    """Closed form: sum over the number k of merged pairs."""
    from math import factorial

    return sum(
        factorial(r + s - k) // (factorial(r - k) * factorial(s - k) * factorial(k))
        for k in range(min(r, s) + 1)
    )


def contract_fibers(sigma: OrderedSurjection, left: Sequence, right: Sequence, combine):
    """Generic contraction: fiber values combined with ``combine``."""
    if len(left) != sigma.r or len(right) != sigma.s:
        raise ArityMismatch(
            f"lengths ({len(left)}, {len(right)}) do not match surjection ({sigma.r}, {sigma.s})"
        )
    values = list(left) + list(right)
    out = []
    for fiber in sigma.fibers():
        if len(fiber) == 1:
            out.append(values[fiber[0] - 1])
        else:
            out.append(combine(values[fiber[0] - 1], values[fiber[1] - 1]))
    return tuple(out)


def stuffle_contract(sigma: OrderedSurjection, left: Index, right: Index) -> Index:
    """Entries over a two-element fiber are added."""
    return contract_fibers(sigma, left, right, lambda a, b: a + b)


def contract_variables(sigma: OrderedSurjection, left: Sequence, right: Sequence) -> tuple:
    """Variables over a two-element fiber are multiplied (used for polylog identities)."""
    return contract_fibers(sigma, left, right, lambda a, b: a * b)


@lru_cache(maxsize=None)
def _stuffle_indices(a: Index, b: Index) -> tuple[tuple[Index, int], ...]:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    acc: dict[Index, int] = {}
    for sigma in enumerate_ordered_surjections(len(a), len(b)):
        c = stuffle_contract(sigma, a, b)
        acc[c] = acc.get(c, 0) + 1
    return tuple(sorted(acc.items()))


def stuffle(a: Index | Combination, b: Index | Combination) -> Combination:
    """Quasi-shuffle product on indices, bilinear in combinations."""
    if isinstance(a, tuple) and isinstance(b, tuple):
        return Combination(_stuffle_indices(check_index(a), check_index(b)))
    left = Combination.single(a) if isinstance(a, tuple) else a
    right = Combination.single(b) if isinstance(b, tuple) else b
    acc: list = []
    for x, cx in left.items():
        for y, cy in right.items():
            acc.extend((z, cx * cy * c) for z, c in _stuffle_indices(x, y))
    return Combination(acc)


def word_stuffle(u: Word, v: Word) -> Combination:
    """Stuffle transported to index words (both must end in B or be empty)."""
    return stuffle(word_to_index(u), word_to_index(v)).map_keys(index_to_word)
