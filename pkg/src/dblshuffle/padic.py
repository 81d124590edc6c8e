"""Truncated p-adic numbers, branch-dependent logarithm and p-adic polylogarithms.

A :class:`PAdic` is ``p^val * unit + O(p^prec)`` with ``unit`` a p-adic unit
stored modulo ``p^(prec - val)``.  Zero carries only its absolute precision
(``prec=None`` marks an exact zero).  Every operation derives the precision
of its result from the precisions of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotInDisc, ZeroArgument
from .words import Index, check_index, contract_variables, enumerate_ordered_surjections, index_to_word, shuffle, stuffle_contract, word_to_index


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ZeroArgument("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(q: Fraction, p: int) -> int:
    return valuation(q.numerator, p) - valuation(q.denominator, p)


class PAdic:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val: int, unit: int, prec: int | None):
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p: int, prec: int | None = None) -> "PAdic":
        return cls(p, prec if prec is not None else 0, 0, prec)

    @classmethod
    def from_rational(cls, q, p: int, rel_prec: int) -> "PAdic":
        """Rational q known to relative precision ``rel_prec``."""
        q = Fraction(q)
        if q == 0:
            return cls.zero(p)
        v = rational_valuation(q, p)
        num = q.numerator // p ** max(v, 0)
        den = q.denominator // p ** max(-v, 0)
        mod = p**rel_prec
        return cls(p, v, num * pow(den, -1, mod) % mod, v + rel_prec)

    # structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def rel_prec(self) -> int:
        return 0 if self.is_zero() else self.prec - self.val

    def valuation(self) -> int | None:
        """Valuation, or the known absolute precision for an inexact zero (None if exact)."""
        return self.val if not self.is_zero() else self.prec

    @staticmethod
    def _normalized(p: int, s: int, v: int, prec: int | None) -> "PAdic":
        if prec is None:
            raise ValueError("exact nonzero values are not represented")
        mod_exp = prec - v
        if mod_exp <= 0:
            return PAdic.zero(p, prec)
        s %= p**mod_exp
        if s == 0:
            return PAdic.zero(p, prec)
        t = 0
        while s % p == 0:
            s //= p
            t += 1
        return PAdic(p, v + t, s % p ** (mod_exp - t), prec)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "PAdic":
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        q = Fraction(other)
        if q == 0:
            return PAdic.zero(self.p)
        # exact rationals enter with enough relative precision to never limit the result
        cap = (self.prec if self.prec is not None else 0) - rational_valuation(q, self.p) + 1
        return PAdic.from_rational(q, self.p, max(cap, 1))

    def __add__(self, other) -> "PAdic":
        other = self._coerce(other)
        precs = [x for x in (self.prec, other.prec) if x is not None]
        prec = min(precs) if precs else None
        if self.is_zero():
            return _trim(other, prec)
        if other.is_zero():
            return _trim(self, prec)
        v = min(self.val, other.val)
        s = self.unit * self.p ** (self.val - v) + other.unit * self.p ** (other.val - v)
        return PAdic._normalized(self.p, s, v, prec)

    __radd__ = __add__

    def __neg__(self) -> "PAdic":
        if self.is_zero():
            return self
        return PAdic(self.p, self.val, (-self.unit) % self.p**self.rel_prec, self.prec)

    def __sub__(self, other) -> "PAdic":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PAdic":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PAdic":
        other = self._coerce(other)
        p = self.p
        if self.is_zero() or other.is_zero():
            if self.is_zero() and other.is_zero():
                prec = None if self.prec is None or other.prec is None else self.prec + other.prec
                return PAdic.zero(p, prec)
            z, x = (self, other) if self.is_zero() else (other, self)
            return PAdic.zero(p, None if z.prec is None else z.prec + x.val)
        rel = min(self.rel_prec, other.rel_prec)
        v = self.val + other.val
        return PAdic(p, v, self.unit * other.unit % p**rel, v + rel)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PAdic":
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroArgument("division by a p-adic zero")
        p = self.p
        if self.is_zero():
            return PAdic.zero(p, None if self.prec is None else self.prec - other.val)
        rel = min(self.rel_prec, other.rel_prec)
        v = self.val - other.val
        return PAdic(p, v, self.unit * pow(other.unit, -1, p**rel) % p**rel, v + rel)

    def __rtruediv__(self, other) -> "PAdic":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "PAdic":
        if n < 0:
            return (self**-n).__rtruediv__(1)
        if n == 0:
            return PAdic.from_rational(1, self.p, max(self.rel_prec, 1))
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def scale(self, q) -> "PAdic":
        """Multiply by an exact rational without losing relative precision."""
        q = Fraction(q)
        p = self.p
        if q == 0:
            return PAdic.zero(p)
        v = rational_valuation(q, p)
        if self.is_zero():
            return PAdic.zero(p, None if self.prec is None else self.prec + v)
        num = q.numerator // p ** max(v, 0)
        den = q.denominator // p ** max(-v, 0)
        rel = self.rel_prec
        mod = p**rel
        return PAdic(p, self.val + v, self.unit * num * pow(den, -1, mod) % mod, self.prec + v)

    # comparison and output -------------------------------------------------

    def residual_valuation(self, other) -> int | None:
        """Valuation of self - other; for an indistinguishable pair, the known precision."""
        return (self - other).valuation()

    def to_rational(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def digits(self) -> list[int]:
        out = []
        u = self.unit
        for _ in range(self.rel_prec):
            out.append(u % self.p)
            u //= self.p
        return out

    def __str__(self) -> str:
        tail = "" if self.prec is None else f" + O({self.p}^{self.prec})"
        if self.is_zero():
            return ("0" + tail) if tail else "0"
        terms = []
        for i, d in enumerate(self.digits()):
            if d:
                terms.append(str(d) if i == 0 else (f"{d}*{self.p}" if i == 1 else f"{d}*{self.p}^{i}"))
        return f"{self.p}^{self.val} * ({' + '.join(terms)}){tail}"

    __repr__ = __str__

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "valuation": None if self.is_zero() else self.val,
            "digits": self.digits(),
            "precision": self.prec,
            "text": str(self),
        }


def _trim(x: PAdic, prec: int | None) -> PAdic:
    if prec is None or (x.prec is not None and x.prec <= prec):
        return x
    if x.is_zero():
        return PAdic.zero(x.p, prec)
    return PAdic._normalized(x.p, x.unit, x.val, prec)


@dataclass(frozen=True)
class PAdicContext:
    """Prime, working precision N and branch value a = log(p)."""

    p: int
    prec: int
    branch: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"{self.p} is not a prime")
        if self.prec < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "branch", Fraction(self.branch))

    def element(self, x) -> PAdic:
        """Rational (or string "a/b") as a p-adic number known mod p^N."""
        if isinstance(x, PAdic):
            return x
        q = Fraction(x)
        if q == 0:
            return PAdic.zero(self.p, self.prec)
        v = rational_valuation(q, self.p)
        return PAdic.from_rational(q, self.p, max(self.prec - v, 1))

    def branch_value(self) -> PAdic:
        if self.branch == 0:
            return PAdic.zero(self.p)
        return self.element(self.branch)


# ---------------------------------------------------------------------------
# logarithm


def padic_log(x, ctx: PAdicContext) -> PAdic:
    """log^a(x) = v*a + log(u) for x = p^v u.

    log(u) = log(u^e)/e with e = p-1 (e = 2 for p = 2), so u^e = 1 + y with
    |y| < 1 and the series for log(1+y) converges.  The result is known to
    absolute precision equal to the relative precision of x (one digit
    less for p = 2).
    """
    x = ctx.element(x)
    if x.is_zero():
        raise ZeroArgument("log of zero")
    p = x.p
    rel = x.rel_prec
    e = 2 if p == 2 else p - 1
    out_prec = rel - 1 if p == 2 else rel
    work = out_prec + 2 + int(math.log(max(out_prec, 1) + 2, p)) + 2
    mod = p**work
    y = (pow(x.unit, e, mod) - 1) % mod
    vy = valuation(y, p) if y else work
    total = Fraction(0)
    if y:
        k = 1
        # terms with k*v(y) - v_p(k) beyond the working precision are dropped
        while k * vy - math.floor(math.log(k, p) + 1e-12) < work + 1:
            total += Fraction((-1) ** (k + 1) * y**k, k)
            k += 1
    log_u = PAdic.zero(p, out_prec) if total == 0 else _rational_to_padic(total / e, p, out_prec)
    if x.val and ctx.branch:
        log_u = log_u + ctx.branch_value().scale(x.val)
    return log_u


def _rational_to_padic(q: Fraction, p: int, abs_prec: int) -> PAdic:
    v = rational_valuation(q, p)
    if v >= abs_prec:
        return PAdic.zero(p, abs_prec)
    return PAdic.from_rational(q, p, abs_prec - v)


# ---------------------------------------------------------------------------
# polylogarithms


def _truncation_bound(v_min: int, weight: int, p: int, target: int) -> int:
    """K such that k*v_min - weight*log_p(k) >= target for every k >= K.

    The continuous lower bound is increasing past weight/(v_min ln p), so
    checking it at K suffices; v_p(k) <= floor(log_p k) does the rest.
    """
    k = max(1, int(weight / (v_min * math.log(p))) + 1)
    while k * v_min - weight * math.log(k) / math.log(p) < target + 1e-9:
        k += 1
    return k


def _floor_log(k: int, p: int) -> int:
    t = 0
    while p ** (t + 1) <= k:
        t += 1
    return t


def eval_mpl_padic(index: Index, point: Sequence, ctx: PAdicContext) -> PAdic:
    """Truncated series Li_index(x_1..x_m) inside the polydisc |x_i..x_m|_p < 1."""
    index = check_index(index)
    if len(point) != len(index):
        raise ValueError("point and index lengths differ")
    if not index:
        return PAdic.from_rational(1, ctx.p, ctx.prec)
    xs = [ctx.element(x) for x in point]
    ys = []
    acc = None
    for x in reversed(xs):
        acc = x if acc is None else acc * x
        ys.append(acc)
    ys.reverse()
    if ys[-1].is_zero() and ys[-1].prec is None:
        return PAdic.zero(ctx.p, None)
    for y in ys:
        if not y.is_zero() and y.val <= 0:
            raise NotInDisc(f"tail product has valuation {y.val} <= 0")
    v_min = min(y.valuation() if y.valuation() is not None else ctx.prec for y in ys)
    v_min = max(v_min, 1)
    target = ctx.prec + 2
    K = _truncation_bound(v_min, sum(index), ctx.p, target)
    m = len(index)
    zero = PAdic.zero(ctx.p, None)
    V = [ys[0]] + [zero] * (m - 1)
    total = zero
    for k in range(1, K + 1):
        U = [V[j].scale(Fraction(1, k ** index[j])) for j in range(m)]
        total = total + U[m - 1]
        V[0] = ys[0] * V[0]
        for j in range(1, m):
            V[j] = ys[j] * (V[j] + U[j - 1])
    return _trim(total, ctx.prec)


def eval_li_one_padic(index: Index, z, ctx: PAdicContext) -> PAdic:
    """One-variable Li_index(z): all variables 1 except the last."""
    index = check_index(index)
    if not index:
        return PAdic.from_rational(1, ctx.p, ctx.prec)
    return eval_mpl_padic(index, [1] * (len(index) - 1) + [z], ctx)


def verify_series_shuffle_padic(left: Index, left_point: Sequence, right: Index, right_point: Sequence, ctx: PAdicContext):
    """Valuation of Li_a(x) Li_b(y) - Σ_σ Li_{σ(a,b)}(σ(x,y))."""
    left, right = check_index(left), check_index(right)
    lhs = eval_mpl_padic(left, left_point, ctx) * eval_mpl_padic(right, right_point, ctx)
    if not left or not right:
        rhs = eval_mpl_padic(left or right, left_point if left else right_point, ctx)
        return (lhs - rhs).valuation()
    xs = [ctx.element(x) for x in left_point]
    ys = [ctx.element(y) for y in right_point]
    rhs = PAdic.zero(ctx.p, None)
    for sigma in enumerate_ordered_surjections(len(left), len(right)):
        rhs = rhs + eval_mpl_padic(stuffle_contract(sigma, left, right), contract_variables(sigma, xs, ys), ctx)
    return (lhs - rhs).valuation()


def verify_integral_shuffle_padic(k: Index, k2: Index, z, ctx: PAdicContext):
    """Valuation of Li_k(z) Li_k'(z) - Σ over shuffles of the index words."""
    k, k2 = check_index(k), check_index(k2)
    z = ctx.element(z)
    if z.is_zero() is False and z.val <= 0:
        raise NotInDisc("|z|_p must be < 1")
    lhs = eval_li_one_padic(k, z, ctx) * eval_li_one_padic(k2, z, ctx)
    rhs = PAdic.zero(ctx.p, None)
    for w, c in shuffle(index_to_word(k), index_to_word(k2)).items():
        rhs = rhs + eval_li_one_padic(word_to_index(w), z, ctx).scale(c)
    return (lhs - rhs).valuation()
