"""Truncated formal Laurent series over a coefficient ring.

A series stores exact coefficients at exponents up to its truncation T;
coefficients above T are unknown (not zero). The zero series has order
+infinity. Truncation propagates pessimistically through arithmetic, and a
consumer asking for a coefficient above T gets PrecisionExhausted, never a
silent zero.

The coefficient ring may itself be a SeriesRing, which is how two
interacting infinitesimals are modeled (nested single-variable series).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivisionByZero, LimitDoesNotExist, PrecisionExhausted

INF = math.inf


@dataclass(frozen=True)
class SeriesRing:
    """Ring of truncated Laurent series over `base` (a FieldSpec or another
    SeriesRing). `budget` is the relative precision used when an operation
    (inversion of a non-monomial) inherently truncates an exact operand."""

    base: object
    budget: int = 24

    @property
    def zero(self) -> "LaurentSeries":
        return LaurentSeries(self, (), INF)

    @property
    def one(self) -> "LaurentSeries":
        return self.lift(self.base.one)

    def from_int(self, n: int) -> "LaurentSeries":
        return self.lift(self.base.from_int(n))

    def lift(self, c) -> "LaurentSeries":
        if c.is_zero():
            return self.zero
        return LaurentSeries(self, ((0, c),), INF)

    def eps(self, k: int = 1, coeff=None) -> "LaurentSeries":
        c = self.base.one if coeff is None else coeff
        if c.is_zero():
            return self.zero
        return LaurentSeries(self, ((k, c),), INF)

    def series(self, coeffs: dict, trunc=INF) -> "LaurentSeries":
        items = tuple(sorted((k, c) for k, c in coeffs.items() if not c.is_zero() and k <= trunc))
        return LaurentSeries(self, items, trunc)

    def with_budget(self, budget: int) -> "SeriesRing":
        return SeriesRing(self.base, budget)

    def __repr__(self):
        return f"Series({self.base!r})"


@dataclass(frozen=True)
class LaurentSeries:
    ring: SeriesRing
    coeffs: tuple  # sorted ((exponent, coefficient), ...), no zero coefficients
    trunc: float  # int or INF

    # -- inspection ----------------------------------------------------------

    def order(self):
        return self.coeffs[0][0] if self.coeffs else INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return not self.is_zero()

    def coef(self, k: int):
        if k > self.trunc:
            raise PrecisionExhausted(f"coefficient at eps^{k} above truncation {self.trunc}")
        for e, c in self.coeffs:
            if e == k:
                return c
        return self.ring.base.zero

    def limit(self):
        if self.order() < 0:
            raise LimitDoesNotExist(f"order {self.order()} < 0")
        if self.trunc < 0:
            raise PrecisionExhausted("truncation below 0, constant term unknown")
        return self.coef(0)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("series from different rings")

    def __add__(self, other):
        self._check(other)
        t = min(self.trunc, other.trunc)
        acc = dict(self.coeffs)
        for e, c in other.coeffs:
            acc[e] = acc[e] + c if e in acc else c
        return self.ring.series(acc, t)

    def __neg__(self):
        return LaurentSeries(self.ring, tuple((e, -c) for e, c in self.coeffs), self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        t = min(self.trunc + other.order(), other.trunc + self.order())
        if t is INF or t == INF:
            t = INF
        elif math.isnan(t):  # INF + (-INF) can't occur: order <= trunc always
            t = INF
        acc: dict = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                e = e1 + e2
                if e <= t:
                    acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return self.ring.series(acc, t)

    def scale(self, c) -> "LaurentSeries":
        """Multiply by a coefficient-ring constant."""
        return self * self.ring.lift(c)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by eps^k."""
        return LaurentSeries(self.ring, tuple((e + k, c) for e, c in self.coeffs),
                             self.trunc + k if self.trunc is not INF else INF)

    def inv(self) -> "LaurentSeries":
        if not self.coeffs:
            if self.trunc is INF:
                raise DivisionByZero("inverse of the zero series")
            raise PrecisionExhausted("no certain leading coefficient to invert")
        d = self.order()
        lead = self.coeffs[0][1]
        lead_inv = lead.inv()
        # u = self / (lead eps^d) - 1, order(u) >= 1, trunc(u) = self.trunc - d
        u_items = tuple((e - d, c * lead_inv) for e, c in self.coeffs[1:])
        u = LaurentSeries(self.ring, u_items,
                          self.trunc - d if self.trunc is not INF else INF)
        if not u.coeffs and u.trunc is INF:
            return LaurentSeries(self.ring, ((-d, lead_inv),), INF)
        rel = u.trunc if u.trunc is not INF else self.ring.budget
        if rel < 0:
            raise PrecisionExhausted("inverse truncation falls below its order")
        rel = int(rel)
        geom = self.ring.series({0: self.ring.base.one}, rel)
        term = geom
        uo = u.order()
        if uo is INF:
            series_sum = geom
        else:
            series_sum = geom
            power = geom
            k = 1
            while k * uo <= rel:
                power = (power * (-u)).truncate(rel)
                series_sum = series_sum + power
                k += 1
        return series_sum.shift(-d).scale(lead_inv)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.ring.series({0: self.ring.base.one}, INF)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate(self, t) -> "LaurentSeries":
        if t >= self.trunc:
            return self
        return LaurentSeries(self.ring, tuple((e, c) for e, c in self.coeffs if e <= t), t)

    # -- serialization -------------------------------------------------------

    def text(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            body = " + ".join(f"{c.text() if hasattr(c, 'text') else c}*eps^{e}"
                              for e, c in self.coeffs)
        t = "inf" if self.trunc is INF else str(int(self.trunc))
        return f"{body};T={t}"

    def __repr__(self):
        return self.text()


def order_eps(f: LaurentSeries):
    return f.order()


def limit_eps(f: LaurentSeries):
    return f.limit()


def coef_eps(f: LaurentSeries, k: int):
    return f.coef(k)
