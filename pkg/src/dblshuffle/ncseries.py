"""Truncated noncommutative series in A, B and the DMR_0 membership test.

Coefficients may be Fractions, mpmath numbers or :class:`~dblshuffle.symbols.Poly`
values; the only requirements are ``+ - *``, division by ints and ``abs``
(when a nonzero tolerance is used).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping

from .errors import BadConstantTerm, TruncationMismatch, UnsupportedDegree
from .regularization import reg_integral
from .words import depth as word_depth, shuffle, word_to_index, words_of_weight

MAX_KZ_DEGREE = 8


def _is_zero(c, tol) -> bool:
    if not tol:
        return c == 0
    return abs(c) <= tol


def _residual(c) -> float:
    try:
        return float(abs(c))
    except TypeError:
        return 0.0 if c == 0 else float("inf")


def _words_up_to(degree: int) -> list[str]:
    return [w for n in range(degree + 1) for w in words_of_weight(n)]


class NCSeries:
    """Element of Q<<A,B>> truncated at total degree ``degree``."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping[str, object] | Iterable = ()):
        self.degree = degree
        acc: dict = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for w, c in items:
            if len(w) <= degree:
                acc[w] = acc[w] + c if w in acc else c
        self.coeffs = {w: c for w, c in acc.items() if not _is_zero(c, 0)}

    @classmethod
    def one(cls, degree: int, unit=Fraction(1)) -> "NCSeries":
        return cls(degree, {"": unit})

    @classmethod
    def letter(cls, letter: str, degree: int, coefficient=Fraction(1)) -> "NCSeries":
        return cls(degree, {letter: coefficient})

    def coefficient(self, word: str, zero=Fraction(0)):
        return self.coeffs.get(word, zero)

    def constant(self):
        return self.coeffs.get("", Fraction(0))

    def _check(self, other: "NCSeries"):
        if self.degree != other.degree:
            raise TruncationMismatch(f"degrees {self.degree} and {other.degree} differ")

    def __add__(self, other: "NCSeries") -> "NCSeries":
        self._check(other)
        return NCSeries(self.degree, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __neg__(self) -> "NCSeries":
        return NCSeries(self.degree, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        return self + (-other)

    def scale(self, c) -> "NCSeries":
        return NCSeries(self.degree, {w: v * c for w, v in self.coeffs.items()})

    def __mul__(self, other) -> "NCSeries":
        if not isinstance(other, NCSeries):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        for u, a in self.coeffs.items():
            room = self.degree - len(u)
            for v, b in other.coeffs.items():
                if len(v) <= room:
                    w = u + v
                    acc[w] = acc[w] + a * b if w in acc else a * b
        return NCSeries(self.degree, acc)

    def __eq__(self, other) -> bool:
        return isinstance(other, NCSeries) and self.degree == other.degree and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def max_difference(self, other: "NCSeries") -> float:
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((_residual(self.coefficient(w) - other.coefficient(w)) for w in keys), default=0.0)

    def exp(self) -> "NCSeries":
        if not _is_zero(self.constant(), 0):
            raise BadConstantTerm("exp needs constant term 0")
        out = NCSeries.one(self.degree)
        term = NCSeries.one(self.degree)
        for n in range(1, self.degree + 1):
            term = (term * self).map(lambda c, n=n: c / n)
            out = out + term
        return out

    def log(self) -> "NCSeries":
        if self.constant() != 1:
            raise BadConstantTerm("log needs constant term 1")
        x = self - NCSeries.one(self.degree)
        out = NCSeries(self.degree)
        power = NCSeries.one(self.degree)
        for n in range(1, self.degree + 1):
            power = power * x
            sign = 1 if n % 2 else -1
            out = out + power.map(lambda c, n=n, s=sign: c * s / n)
        return out

    def map(self, f: Callable) -> "NCSeries":
        return NCSeries(self.degree, {w: f(c) for w, c in self.coeffs.items()})

    def substitute_b_sign(self) -> "NCSeries":
        """The series g(A, -B)."""
        return NCSeries(self.degree, {w: (-c if w.count("B") % 2 else c) for w, c in self.coeffs.items()})

    def __repr__(self) -> str:
        terms = sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return " + ".join(f"{c}*{w or '1'}" for w, c in terms) or "0"


def nc_mul(f: NCSeries, g: NCSeries) -> NCSeries:
    return f * g


def nc_exp(f: NCSeries) -> NCSeries:
    return f.exp()


def nc_log(f: NCSeries) -> NCSeries:
    return f.log()


# ---------------------------------------------------------------------------
# shuffle coproduct


def coproduct_sh(g: NCSeries) -> dict:
    """Δ with A, B primitive, as a map (u, v) -> coefficient."""
    acc: dict = {}
    for w, c in g.coeffs.items():
        n = len(w)
        for mask in range(1 << n):
            u = "".join(w[i] for i in range(n) if mask >> i & 1)
            v = "".join(w[i] for i in range(n) if not mask >> i & 1)
            key = (u, v)
            acc[key] = acc[key] + c if key in acc else c
    return {k: c for k, c in acc.items() if not _is_zero(c, 0)}


def tensor_square(coeffs: Mapping, degree: int, size: Callable = len) -> dict:
    out = {}
    for u, a in coeffs.items():
        for v, b in coeffs.items():
            if size(u) + size(v) <= degree:
                out[(u, v)] = a * b
    return out


@dataclass
class GroupLikeReport:
    ok: bool
    worst_residual: float
    first_failure: object = None

    def __bool__(self) -> bool:
        return self.ok


def _compare(lhs: Mapping, rhs: Mapping, tol) -> GroupLikeReport:
    worst = 0.0
    first = None
    for key in sorted(set(lhs) | set(rhs), key=lambda k: (sum(map(_size, k)), k)):
        d = (lhs[key] if key in lhs else 0) - (rhs[key] if key in rhs else 0)
        r = _residual(d)
        worst = max(worst, r)
        if first is None and not _is_zero(d, tol):
            first = key
    return GroupLikeReport(first is None, worst, first)


def _size(x) -> int:
    return len(x) if isinstance(x, str) else sum(x)


def _require_unit_constant(c, tol):
    if not _is_zero(c - 1, tol):
        raise BadConstantTerm(f"constant term {c} is not 1")


def is_grouplike(g: NCSeries, tol=0, method: str = "coproduct") -> GroupLikeReport:
    """Δg = g⊗g up to total degree D, or equivalently c_u c_v = Σ_{w in u⧢v} c_w."""
    _require_unit_constant(g.constant(), tol)
    if method == "coproduct":
        return _compare(coproduct_sh(g), tensor_square(g.coeffs, g.degree), tol)
    if method == "shuffle":
        lhs, rhs = {}, {}
        words = _words_up_to(g.degree)
        for u in words:
            for v in words:
                if len(u) + len(v) > g.degree:
                    continue
                lhs[(u, v)] = g.coefficient(u) * g.coefficient(v)
                total = 0
                for w, k in shuffle(u, v).items():
                    total = total + g.coefficient(w) * int(k)
                rhs[(u, v)] = total
        return _compare(lhs, rhs, tol)
    raise ValueError(f"unknown method {method!r}")


def is_primitive(f: NCSeries, tol=0) -> GroupLikeReport:
    """Δf = f⊗1 + 1⊗f."""
    rhs: dict = {}
    for w, c in f.coeffs.items():
        for key in ((w, ""), ("", w)):
            rhs[key] = rhs[key] + c if key in rhs else c
    return _compare(coproduct_sh(f), rhs, tol)


# ---------------------------------------------------------------------------
# y-series


class YSeries:
    """Series in noncommuting y_1, y_2, ...; keys are tuples (n_1..n_m), weight Σ n_i."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping | Iterable = ()):
        self.degree = degree
        acc: dict = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for key, c in items:
            key = tuple(key)
            if sum(key) <= degree:
                acc[key] = acc[key] + c if key in acc else c
        self.coeffs = {k: c for k, c in acc.items() if not _is_zero(c, 0)}

    def coefficient(self, key, zero=Fraction(0)):
        return self.coeffs.get(tuple(key), zero)

    def constant(self):
        return self.coeffs.get((), Fraction(0))

    def __add__(self, other: "YSeries") -> "YSeries":
        if self.degree != other.degree:
            raise TruncationMismatch("degrees differ")
        return YSeries(self.degree, list(self.coeffs.items()) + list(other.coeffs.items()))

    def __mul__(self, other: "YSeries") -> "YSeries":
        if self.degree != other.degree:
            raise TruncationMismatch("degrees differ")
        acc: dict = {}
        for u, a in self.coeffs.items():
            for v, b in other.coeffs.items():
                if sum(u) + sum(v) <= self.degree:
                    k = u + v
                    acc[k] = acc[k] + a * b if k in acc else a * b
        return YSeries(self.degree, acc)

    def map(self, f: Callable) -> "YSeries":
        return YSeries(self.degree, {k: f(c) for k, c in self.coeffs.items()})

    def exp(self) -> "YSeries":
        if not _is_zero(self.constant(), 0):
            raise BadConstantTerm("exp needs constant term 0")
        out = YSeries(self.degree, {(): Fraction(1)})
        term = out
        for n in range(1, self.degree + 1):
            term = (term * self).map(lambda c, n=n: c / n)
            out = out + term
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, YSeries) and self.degree == other.degree and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return " + ".join(f"{c}*y{list(k)}" for k, c in terms) or "0"


def pi_y(g: NCSeries) -> YSeries:
    """Kill words ending in A; send A^(n1-1)B...A^(nm-1)B to y_n1...y_nm."""
    out = {}
    for w, c in g.coeffs.items():
        if w.endswith("A"):
            continue
        out[tuple(len(b) + 1 for b in w.split("B")[:-1])] = c
    return YSeries(g.degree, out)


def g_star(g: NCSeries) -> YSeries:
    """exp(-Σ_n (-1)^n/n c_(A^(n-1)B) y_1^n) · π_y(g)."""
    if g.constant() != 1:
        raise BadConstantTerm("g_* needs constant term 1")
    exponent = {}
    for n in range(1, g.degree + 1):
        c = g.coefficient("A" * (n - 1) + "B")
        if not _is_zero(c, 0):
            exponent[(1,) * n] = c * (-((-1) ** n)) / n
    return YSeries(g.degree, exponent).exp() * pi_y(g)


def coproduct_star(h: YSeries) -> dict:
    """Δ_* y_n = Σ_{i=0}^n y_i ⊗ y_(n-i) with y_0 = 1, extended multiplicatively."""
    acc: dict = {}
    for key, c in h.coeffs.items():
        for split in product(*(range(n + 1) for n in key)):
            left = tuple(i for i in split if i)
            right = tuple(n - i for n, i in zip(key, split) if n - i)
            k = (left, right)
            acc[k] = acc[k] + c if k in acc else c
    return {k: c for k, c in acc.items() if not _is_zero(c, 0)}


def is_grouplike_star(h: YSeries, tol=0) -> GroupLikeReport:
    _require_unit_constant(h.constant(), tol)
    return _compare(coproduct_star(h), tensor_square(h.coeffs, h.degree, sum), tol)


# ---------------------------------------------------------------------------
# DMR_0


@dataclass
class DMRReport:
    condition1: bool
    condition2: bool
    condition3: bool
    worst_residual: float
    first_failure: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.condition1 and self.condition2 and self.condition3

    def to_json(self) -> dict:
        return {
            "condition1": self.condition1,
            "condition2": self.condition2,
            "condition3": self.condition3,
            "worst_residual": self.worst_residual,
            "first_failure": {k: _key_text(v) for k, v in self.first_failure.items()},
        }


def _key_text(key) -> str:
    if isinstance(key, tuple) and len(key) == 2 and all(isinstance(x, (str, tuple)) for x in key):
        return " ⊗ ".join(_key_text(x) for x in key)
    if isinstance(key, str):
        return key or "1"
    if isinstance(key, tuple):
        return "".join(f"y{n}" for n in key) or "1"
    return str(key)


def check_dmr0(g: NCSeries, tol=0) -> DMRReport:
    """Constant term 1 and c_A = c_B = 0; Δ-group-like; g_* Δ_*-group-like."""
    failures: dict = {}
    worst = 0.0
    c1 = True
    for word, target in (("", 1), ("A", 0), ("B", 0)):
        d = g.coefficient(word) - target
        worst = max(worst, _residual(d))
        if not _is_zero(d, tol):
            c1 = False
            failures.setdefault("condition1", word)
    try:
        r2 = is_grouplike(g, tol)
        c2 = r2.ok
        worst = max(worst, r2.worst_residual)
        if not c2:
            failures["condition2"] = r2.first_failure
    except BadConstantTerm:
        c2 = False
        failures["condition2"] = ""
    try:
        r3 = is_grouplike_star(g_star(g), tol)
        c3 = r3.ok
        worst = max(worst, r3.worst_residual)
        if not c3:
            failures["condition3"] = r3.first_failure
    except BadConstantTerm:
        c3 = False
        failures["condition3"] = ()
    return DMRReport(c1, c2, c3, worst, failures)


# ---------------------------------------------------------------------------
# KZ associator


def kz_associator(degree: int, source: str = "complex", digits: int = 30) -> NCSeries:
    """Truncated Φ_KZ: index words get (-1)^depth reg_integral at T = 0.

    Words ending in A are filled in as the unique group-like completion:
    for w = vA^k with v ending in B, v ⧢ A^k = w + (words with fewer
    trailing A's) and c(A^k) = 0, so c(w) is minus the remaining terms.
    ``source`` is "complex" (mpmath values) or "symbolic" (formal symbols;
    group-likeness then holds only modulo MZV relations).
    """
    if degree < 1 or degree > MAX_KZ_DEGREE:
        raise UnsupportedDegree(f"degree must be between 1 and {MAX_KZ_DEGREE}")
    if source == "complex":
        from .numeric import context, mzv_table

        table = mzv_table(degree, digits)
        ctx = context(digits)
        one = ctx.mpf(1)

        def value(poly):
            return ctx.convert(poly.evaluate(table.__getitem__)) if poly else ctx.mpf(0)

    elif source == "symbolic":
        from .symbols import Poly

        one = Poly.const(1)

        def value(poly):
            return poly

    else:
        raise ValueError(f"unknown coefficient source {source!r}")

    coeffs: dict = {"": one}
    for n in range(1, degree + 1):
        for w in words_of_weight(n):
            if w.endswith("B"):
                sign = -1 if word_depth(w) % 2 else 1
                coeffs[w] = value(reg_integral(w).at_t_zero()) * sign
    for n in range(1, degree + 1):
        # fewer trailing A's first so the recursion only looks up known values
        for w in sorted((w for w in words_of_weight(n) if w.endswith("A")), key=_trailing_a):
            v = w.rstrip("A")
            if not v:
                coeffs[w] = one * 0
                continue
            k = len(w) - len(v)
            total = one * 0
            for u, c in shuffle(v, "A" * k).items():
                if u != w:
                    total = total + coeffs[u] * int(c)
            coeffs[w] = -total
    return NCSeries(degree, coeffs)


def _trailing_a(w: str) -> int:
    return len(w) - len(w.rstrip("A"))
