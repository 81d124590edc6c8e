"""High-precision complex evaluation of MZVs and multiple polylogarithms.

Every call works in its own mpmath context at ``digits + GUARD`` decimal
digits and returns a :class:`NumericValue` carrying an absolute error bound.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from mpmath import MPContext, bernfrac

from .errors import NonAdmissible, OutOfRegion
from .words import Index, check_index, format_index, index_to_word, is_admissible, word_to_index

GUARD = 15
ONE_VARIABLE_RADIUS = Fraction(1, 2)
MAX_TAIL_RATIO = 0.9


@lru_cache(maxsize=64)
def context(digits: int) -> MPContext:
    """A private mpmath context at ``digits`` plus guard digits (never mutated)."""
    ctx = MPContext()
    ctx.dps = digits + GUARD
    return ctx


@dataclass(frozen=True)
class NumericValue:
    value: object  # mpf or mpc
    error: object  # mpf, absolute bound
    digits: int

    def __float__(self) -> float:
        return float(self.value.real) if hasattr(self.value, "imag") else float(self.value)

    def __complex__(self) -> complex:
        return complex(self.value)

    def text(self) -> str:
        ctx = context(self.digits)
        return ctx.nstr(self.value, self.digits)

    def error_exponent(self) -> int:
        if not self.error:
            return -10**6
        return int(math.floor(math.log10(float(self.error))))

    def to_json(self) -> dict:
        ctx = context(self.digits)
        v = self.value
        out = {"digits": self.digits, "error_bound": ctx.nstr(self.error, 3), "error_exponent": self.error_exponent()}
        if isinstance(v, ctx.mpc) and v.imag != 0:
            out["real"] = ctx.nstr(v.real, self.digits)
            out["imag"] = ctx.nstr(v.imag, self.digits)
        else:
            out["value"] = ctx.nstr(v.real if isinstance(v, ctx.mpc) else v, self.digits)
        return out


_COMPLEX_RE = re.compile(r"([+-]?[0-9.]+(?:e[+-]?\d+)?(?=[+-]))?([+-]?[0-9.]*(?:e[+-]?\d+)?)j")


def to_number(ctx: MPContext, x):
    """Convert int, Fraction, float, complex, decimal string or mp value."""
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        s = x.strip().replace(" ", "")
        if "/" in s and "j" not in s:
            return to_number(ctx, Fraction(s))
        if "j" in s or "i" in s:
            m = _COMPLEX_RE.fullmatch(s.replace("i", "j"))
            if not m:
                raise ValueError(f"cannot parse complex number {x!r}")
            re_part, im_part = m.group(1) or "0", m.group(2)
            if im_part in ("", "+", "-"):
                im_part += "1"
            return ctx.mpc(ctx.mpf(re_part), ctx.mpf(im_part))
        return ctx.mpf(s)
    if isinstance(x, complex):
        return ctx.mpc(x) if x.imag else ctx.mpf(x.real)
    return ctx.convert(x)


def _tail_bound(ctx: MPContext, rho, depth: int, start: int):
    """Bound for Σ_{k>=start} rho^k k^(depth-1), or None if the ratio test fails."""
    if rho == 0:
        return ctx.mpf(0)
    q = rho * (1 + ctx.mpf(1) / start) ** (depth - 1)
    if q >= 1:
        return None
    return rho**start * ctx.mpf(start) ** (depth - 1) / (1 - q)


def _truncation(ctx: MPContext, rho, depth: int, digits: int) -> tuple[int, object]:
    target = ctx.mpf(10) ** (-(digits + 3))
    k = 8
    while True:
        b = _tail_bound(ctx, rho, depth, k + 1)
        if b is not None and b <= target:
            return k, b * (1 + ctx.mpf(10) ** -10)
        k = int(k * 1.25) + 1


def _rounding_bound(ctx: MPContext, rho, depth: int, terms: int):
    # majorant Σ_k rho^k k^(depth-1) times accumulated relative rounding
    mass = ctx.mpf(0)
    for k in range(1, terms + 1):
        mass += rho**k * ctx.mpf(k) ** (depth - 1)
    return mass * (terms + depth + 2) * 8 * ctx.eps


# ---------------------------------------------------------------------------
# polylogarithms


def eval_mpl_one(index: Index, z, digits: int = 30) -> NumericValue:
    """Li_index(z) = Σ z^(k_m) / (k_1^n_1 ... k_m^n_m) for |z| <= 1/2."""
    index = check_index(index)
    ctx = context(digits)
    z = to_number(ctx, z)
    if abs(z) > ctx.mpf(1) / 2:
        raise OutOfRegion(f"|z| = {ctx.nstr(abs(z), 5)} exceeds 1/2")
    if not index:
        return NumericValue(ctx.mpf(1), ctx.mpf(0), digits)
    if z == 0:
        return NumericValue(ctx.mpf(0), ctx.mpf(0), digits)
    m = len(index)
    rho = abs(z)
    K, tail = _truncation(ctx, rho, m, digits)
    # partial[j] = Σ_{k_1<...<k_j<k} Π k_i^(-n_i)
    partial = [ctx.mpf(1)] + [ctx.mpf(0)] * (m - 1)
    total = ctx.mpf(0)
    zk = ctx.mpf(1)
    for k in range(1, K + 1):
        zk *= z
        total += zk * partial[m - 1] / ctx.mpf(k) ** index[m - 1]
        for j in range(m - 1, 0, -1):
            partial[j] += partial[j - 1] / ctx.mpf(k) ** index[j - 1]
    err = tail + _rounding_bound(ctx, rho, m, K)
    return NumericValue(total, err, digits)


def tail_products(ctx: MPContext, point: Sequence) -> list:
    """y_i = x_i x_(i+1) ... x_m."""
    ys = []
    acc = ctx.mpf(1)
    for x in reversed(point):
        acc = acc * x
        ys.append(acc)
    return ys[::-1]


def eval_mpl_multi(index: Index, point: Sequence, digits: int = 30) -> NumericValue:
    """Li_index(x_1..x_m) = Σ x_1^k_1 ... x_m^k_m / (k_1^n_1 ... k_m^n_m).

    Summed over the gaps k_i - k_(i-1) so each step multiplies by a tail
    product; requires every |x_i ... x_m| <= 0.9.
    """
    index = check_index(index)
    ctx = context(digits)
    if len(point) != len(index):
        raise ValueError(f"point has {len(point)} coordinates, index has depth {len(index)}")
    xs = [to_number(ctx, x) for x in point]
    if not index:
        return NumericValue(ctx.mpf(1), ctx.mpf(0), digits)
    ys = tail_products(ctx, xs)
    rho = max(abs(y) for y in ys)
    if rho > MAX_TAIL_RATIO:
        raise OutOfRegion(f"tail product of modulus {ctx.nstr(rho, 5)} exceeds {MAX_TAIL_RATIO}")
    m = len(index)
    if ys[-1] == 0:
        return NumericValue(ctx.mpf(0), ctx.mpf(0), digits)
    K, tail = _truncation(ctx, rho, m, digits)
    # V[j]: sums over k_1<...<k_j < k with the gap to k already weighted by y_(j+1)
    V = [ys[0]] + [ctx.mpf(0)] * (m - 1)
    total = ctx.mpf(0)
    for k in range(1, K + 1):
        U = [V[j] / ctx.mpf(k) ** index[j] for j in range(m)]
        total += U[m - 1]
        V[0] = ys[0] * V[0]
        for j in range(1, m):
            V[j] = ys[j] * (V[j] + U[j - 1])
    err = tail + _rounding_bound(ctx, rho, m, K)
    return NumericValue(total, err, digits)


def eval_mpl(index: Index, point: Sequence, digits: int = 30) -> NumericValue:
    return eval_mpl_multi(index, point, digits)


# ---------------------------------------------------------------------------
# MZVs


def _swap(word: str) -> str:
    return word.translate(str.maketrans("AB", "BA"))


def eval_mzv_holder(index: Index, digits: int = 30) -> NumericValue:
    """Split the iterated integral at 1/2: ζ(w) = Σ_{w=uv} Li_{swap(rev u)}(1/2) Li_v(1/2)."""
    index = check_index(index)
    if not is_admissible(index):
        raise NonAdmissible(f"{format_index(index)} is not admissible")
    ctx = context(digits)
    word = index_to_word(index)
    inner = digits + 5
    half = Fraction(1, 2)
    total = ctx.mpf(0)
    err = ctx.mpf(0)
    for i in range(len(word) + 1):
        left = eval_mpl_one(word_to_index(_swap(word[:i][::-1])), half, inner)
        right = eval_mpl_one(word_to_index(word[i:]), half, inner)
        a, b = ctx.convert(left.value), ctx.convert(right.value)
        total += a * b
        err += abs(a) * right.error + abs(b) * left.error + left.error * right.error
    err += (len(word) + 2) * 4 * ctx.eps * abs(total)
    return NumericValue(total, err, digits)


def _hurwitz_tail(sigma: int, max_exp: int) -> dict[int, Fraction]:
    """Asymptotic expansion of Σ_{k>K} k^(-sigma) in powers K^(-e), e <= max_exp."""
    out = {sigma - 1: Fraction(1, sigma - 1), sigma: Fraction(-1, 2)}
    p = 1
    while sigma + 2 * p - 1 <= max_exp:
        num, den = bernfrac(2 * p)
        rising = 1
        for t in range(2 * p - 1):
            rising *= sigma + t
        out[sigma + 2 * p - 1] = Fraction(int(num), int(den)) / math.factorial(2 * p) * rising
        p += 1
    return {e: c for e, c in out.items() if e <= max_exp}


def _tail_expansion(suffix: Index, max_exp: int) -> dict[int, Fraction]:
    """Σ_{K<k_1<...<k_r} Π k_i^(-n_i) as a series in 1/K."""
    series = {0: Fraction(1)}
    for n in reversed(suffix):
        nxt: dict[int, Fraction] = {}
        for e, c in series.items():
            for e2, c2 in _hurwitz_tail(n + e, max_exp).items():
                nxt[e2] = nxt.get(e2, 0) + c * c2
        series = nxt
    return series


def eval_mzv_direct(index: Index, digits: int = 30) -> NumericValue:
    """Nested partial sums to K plus Euler-Maclaurin tails for every suffix.

    ζ = Σ_j S_(j-1)(K; prefix) T_(>K)(suffix), splitting at the first
    summation variable exceeding K.  The error figure is an estimate from
    the change when the expansion order is raised, not a proof.
    """
    index = check_index(index)
    if not is_admissible(index):
        raise NonAdmissible(f"{format_index(index)} is not admissible")
    ctx = context(digits)
    m = len(index)
    K = 4 * (digits + 5)
    order = int(math.ceil((digits + 5) / math.log10(K))) + 4
    partial = [ctx.mpf(1)] + [ctx.mpf(0)] * m
    for k in range(1, K + 1):
        for j in range(m, 0, -1):
            partial[j] += partial[j - 1] / ctx.mpf(k) ** index[j - 1]
    invK = ctx.mpf(1) / K

    def assemble(max_exp: int):
        total = ctx.mpf(0)
        for j in range(m + 1):
            series = _tail_expansion(index[j:], max_exp)
            tail = sum((ctx.mpf(c.numerator) / c.denominator * invK**e for e, c in series.items()), ctx.mpf(0))
            total += partial[j] * tail
        return total

    value = assemble(order)
    better = assemble(order + 6)
    err = abs(better - value) * 10 + ctx.mpf(10) ** (-(digits + 5)) + K * m * 8 * ctx.eps * abs(value)
    return NumericValue(better, err, digits)


def eval_mzv(index: Index, digits: int = 30, strategy: str = "holder") -> NumericValue:
    """ζ(n_1..n_m) = Σ_{0<k_1<...<k_m} Π k_i^(-n_i) for admissible indices."""
    if strategy == "holder":
        return eval_mzv_holder(index, digits)
    if strategy == "direct":
        return eval_mzv_direct(index, digits)
    raise ValueError(f"unknown strategy {strategy!r}")


@lru_cache(maxsize=32)
def _mzv_table(max_weight: int, digits: int) -> tuple:
    from .words import compositions

    out = []
    for w in range(2, max_weight + 1):
        for c in compositions(w):
            if is_admissible(c):
                out.append((c, eval_mzv_holder(c, digits).value))
    return tuple(out)


def mzv_table(max_weight: int, digits: int = 30) -> dict:
    """Numeric values of every admissible index of weight <= max_weight."""
    return dict(_mzv_table(max_weight, digits))


# ---------------------------------------------------------------------------
# differential system


def _drop(seq: Sequence, i: int) -> list:
    return list(seq[:i]) + list(seq[i + 1 :])


def mpl_partial_derivative(index: Index, point: Sequence, i: int, digits: int = 30):
    """Right-hand side of the differential system for ∂/∂x_i (0-based i).

    n_i > 1:  Li_(.., n_i - 1, ..)(x) / x_i
    n_i = 1:  Li(x with x_i merged into x_(i-1)) / (1 - x_i)
              - Li(x with x_i merged into x_(i+1)) / (x_i (1 - x_i)),
    where the first term uses x_0 = 1 and the second is absent for i = m.
    """
    index = check_index(index)
    ctx = context(digits)
    xs = [to_number(ctx, x) for x in point]
    xi = xs[i]
    if index[i] > 1:
        lowered = list(index)
        lowered[i] -= 1
        return ctx.convert(eval_mpl_multi(tuple(lowered), xs, digits).value) / xi
    rest = tuple(_drop(index, i))
    left_pt = _drop(xs, i)
    if i > 0:
        left_pt[i - 1] = xs[i - 1] * xi
    value = ctx.convert(eval_mpl_multi(rest, left_pt, digits).value) / (1 - xi)
    if i < len(index) - 1:
        right_pt = _drop(xs, i)
        right_pt[i] = xi * xs[i + 1]
        value -= ctx.convert(eval_mpl_multi(rest, right_pt, digits).value) / (xi * (1 - xi))
    return value


def verify_mpl_pde(index: Index, point: Sequence, step=Fraction(1, 10**4), digits: int = 30):
    """Max deviation between central differences and the differential system."""
    index = check_index(index)
    ctx = context(digits)
    xs = [to_number(ctx, x) for x in point]
    h = to_number(ctx, step)
    if len(xs) != len(index):
        raise ValueError("point and index lengths differ")
    for x in xs:
        if abs(x) <= 2 * abs(h) or abs(1 - x) <= 2 * abs(h):
            raise OutOfRegion("point too close to x = 0 or x = 1 for this step")
    worst = ctx.mpf(0)
    for i in range(len(xs)):
        plus = list(xs)
        minus = list(xs)
        plus[i] += h
        minus[i] -= h
        fd = (
            ctx.convert(eval_mpl_multi(index, plus, digits).value)
            - ctx.convert(eval_mpl_multi(index, minus, digits).value)
        ) / (2 * h)
        worst = max(worst, abs(fd - mpl_partial_derivative(index, xs, i, digits)))
    return worst
