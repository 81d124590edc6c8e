"""Univariate polynomials and rational functions over Q, with exact limits."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class UPoly:
    """Polynomial in one variable; ``coeffs[k]`` multiplies ``t**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def var(cls) -> "UPoly":
        return cls([0, 1])

    @classmethod
    def lift(cls, x) -> "UPoly":
        return x if isinstance(x, UPoly) else cls([x])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other) -> "UPoly":
        other = UPoly.lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly([-x for x in self.coeffs])

    def __sub__(self, other) -> "UPoly":
        return self + (-UPoly.lift(other))

    def __rsub__(self, other) -> "UPoly":
        return UPoly.lift(other) - self

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            return UPoly([x * Fraction(other) for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UPoly":
        out = UPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x):
        total = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def divide_linear(self, a) -> "UPoly":
        """Quotient by (t - a); the remainder must vanish."""
        a = Fraction(a)
        out = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * a + c
            out.append(acc)
        if out and out[-1] != 0:
            raise ValueError("not divisible by (t - a)")
        return UPoly(list(reversed(out[:-1])))

    def __truediv__(self, other) -> "RatFunc":
        return RatFunc(self, other)

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc(other, self)

    def __eq__(self, other) -> bool:
        try:
            return self.coeffs == UPoly.lift(other).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return " + ".join(f"{c}*t^{k}" for k, c in enumerate(self.coeffs) if c) or "0"


class RatFunc:
    """num/den with den nonzero; no gcd reduction, limits cancel (t - a) factors."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            n = RatFunc.lift(num)
            d = RatFunc.lift(den)
            num, den = n.num * d.den, n.den * d.num
        self.num = UPoly.lift(num)
        self.den = UPoly.lift(den)
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def lift(cls, x) -> "RatFunc":
        return x if isinstance(x, RatFunc) else cls(x)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __add__(self, other) -> "RatFunc":
        o = RatFunc.lift(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.lift(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.lift(other) - self

    def __mul__(self, other) -> "RatFunc":
        o = RatFunc.lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = RatFunc.lift(other)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.lift(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        o = RatFunc.lift(other)
        return (self.num * o.den).coeffs == (o.num * self.den).coeffs

    __hash__ = None  # type: ignore[assignment]

    def __call__(self, x) -> Fraction:
        return self.num(x) / self.den(x)

    def limit(self, a):
        """Exact limit at t = a; returns None for a pole."""
        num, den = self.num, self.den
        a = Fraction(a)
        while num and num(a) == 0 and den(a) == 0:
            num, den = num.divide_linear(a), den.divide_linear(a)
        if not num:
            return Fraction(0)
        if den(a) == 0:
            return None
        return num(a) / den(a)

    def __repr__(self) -> str:
        return f"({self.num})/({self.den})"


def variable() -> RatFunc:
    return RatFunc(UPoly.var())
