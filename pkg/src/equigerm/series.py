"""Univariate power series jets over Q with precision bookkeeping.

A Series holds exact coefficients up to a known precision: coefficient of
degree k is trustworthy iff k <= known_to.  Exact polynomials have
known_to = INF.  Valuations come with a certificate: a valuation is certified
when a nonzero coefficient witnesses it, or when the series is exactly zero.
Conservative precision propagation follows the usual valuation rules, so a
certified claim is always true no matter what the dropped tails were.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

Scalar = Union[int, Fraction]


class Series:
    __slots__ = ("coeffs", "known_to")

    def __init__(self, coeffs, known_to=INF):
        clean: dict[int, Fraction] = {}
        for k, c in dict(coeffs).items():
            if k < 0:
                raise ValueError("negative exponent in series")
            if k <= known_to:
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    clean[int(k)] = c
        self.coeffs = clean
        self.known_to = known_to

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(known_to=INF) -> "Series":
        return Series({}, known_to)

    @staticmethod
    def constant(c: Scalar, known_to=INF) -> "Series":
        return Series({0: c}, known_to)

    @staticmethod
    def t_power(k: int, known_to=INF) -> "Series":
        return Series({k: 1}, known_to)

    # -- queries ---------------------------------------------------------------

    def is_exactly_zero(self) -> bool:
        return self.known_to is INF and not self.coeffs

    def valuation(self) -> tuple[Union[int, float], bool]:
        """(valuation, certified).

        Certified lower bound when no nonzero coefficient is known: the value
        returned is then known_to + 1 with certified=False, meaning only
        val >= known_to + 1 is known.  Exactly zero gives (INF, True).
        """
        if self.coeffs:
            return min(self.coeffs), True
        if self.known_to is INF:
            return INF, True
        return self.known_to + 1, False

    def valuation_lower_bound(self) -> Union[int, float]:
        v, _ = self.valuation()
        return v

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def truncated(self, known_to) -> "Series":
        if known_to >= self.known_to:
            return self
        return Series(self.coeffs, known_to)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        known = min(self.known_to, other.known_to)
        acc = dict(self.coeffs)
        for k, c in other.coeffs.items():
            acc[k] = acc.get(k, Fraction(0)) + c
        return Series(acc, known)

    def __neg__(self) -> "Series":
        return Series({k: -c for k, c in self.coeffs.items()}, self.known_to)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, c: Scalar) -> "Series":
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return Series({}, self.known_to)
        return Series({k: v * c for k, v in self.coeffs.items()}, self.known_to)

    def shift(self, n: int) -> "Series":
        """Multiply by t^n."""
        known = self.known_to if self.known_to is INF else self.known_to + n
        return Series({k + n: c for k, c in self.coeffs.items()}, known)

    def __mul__(self, other: "Series") -> "Series":
        known = _product_precision(self, other)
        acc: dict[int, Fraction] = {}
        for k1, c1 in self.coeffs.items():
            if k1 > known:
                continue
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if k > known:
                    continue
                acc[k] = acc.get(k, Fraction(0)) + c1 * c2
        return Series(acc, known)

    def power(self, e: int) -> "Series":
        if e < 0:
            raise ValueError("negative power")
        result = Series.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self, precision: int) -> "Series":
        """Inverse of a unit (nonzero constant term), correct to `precision`."""
        c0 = self.coefficient(0)
        if not c0:
            raise ValueError("series is not a unit")
        precision = min(precision, self.known_to)
        inv = {0: 1 / c0}
        for k in range(1, int(precision) + 1):
            s = Fraction(0)
            for i in range(1, k + 1):
                ci = self.coefficient(i)
                if ci:
                    s += ci * inv[k - i]
            inv[k] = -s / c0
        return Series(inv, precision)

    def __eq__(self, other):
        return (
            isinstance(other, Series)
            and self.coeffs == other.coeffs
            and self.known_to == other.known_to
        )

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            body = " + ".join(f"{c}*t^{k}" for k, c in sorted(self.coeffs.items()))
        if self.known_to is INF:
            return f"<series {body}>"
        return f"<series {body} + O(t^{self.known_to + 1})>"


def _product_precision(a: Series, b: Series):
    """First unknown degree of a*b is min over the unknown tails."""
    if a.known_to is INF and b.known_to is INF:
        return INF
    va = min(a.coeffs) if a.coeffs else a.known_to + 1
    vb = min(b.coeffs) if b.coeffs else b.known_to + 1
    first_unknown_a = INF if a.known_to is INF else a.known_to + 1 + vb
    first_unknown_b = INF if b.known_to is INF else b.known_to + 1 + va
    return min(first_unknown_a, first_unknown_b) - 1
