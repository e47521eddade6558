"""Exact positive reals of the form ``prod p**e_p`` with rational exponents.

>>> v = FactoredValue.from_int(4) * FactoredValue.from_int(2) ** Fraction(-1, 2)
>>> str(v)
'2^(3/2)'
>>> v > FactoredValue.from_int(2)
True
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Mapping

from sympy import factorint

Rational = int | Fraction


def _factor(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return {int(p): int(e) for p, e in factorint(n).items()}


@total_ordering
class FactoredValue:
    __slots__ = ("_exps", "_hash")

    def __init__(self, exponents: Mapping[int, Rational] | None = None):
        items = []
        for p, e in (exponents or {}).items():
            e = Fraction(e)
            if e:
                items.append((int(p), e))
        items.sort()
        self._exps = tuple(items)
        self._hash = hash(self._exps)

    @classmethod
    def one(cls) -> "FactoredValue":
        return cls()

    @classmethod
    def from_int(cls, n: int) -> "FactoredValue":
        return cls(_factor(int(n)))

    @classmethod
    def from_fraction(cls, q: Rational) -> "FactoredValue":
        q = Fraction(q)
        if q <= 0:
            raise ValueError(f"{q} is not positive")
        exps: dict[int, Fraction] = {p: Fraction(e) for p, e in _factor(q.numerator).items()}
        for p, e in _factor(q.denominator).items():
            exps[p] = exps.get(p, Fraction(0)) - e
        return cls(exps)

    @classmethod
    def parse(cls, text: str) -> "FactoredValue":
        """Parse ``"2^(3/2)*3"``, ``"4"``, ``"1/2"`` and similar renderings."""
        text = text.strip().replace(" ", "").replace("·", "*")
        if re.fullmatch(r"\d+(/\d+)?", text):
            return cls.from_fraction(Fraction(text))
        out = cls()
        for term in text.split("*"):
            m = re.fullmatch(r"(\d+)(?:\^\(?(-?\d+(?:/\d+)?)\)?)?", term)
            if not m:
                raise ValueError(f"cannot parse factored value {text!r}")
            out = out * cls.from_int(int(m.group(1))) ** Fraction(m.group(2) or 1)
        return out

    @property
    def exponents(self) -> dict[int, Fraction]:
        return dict(self._exps)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._exps)

    def is_one(self) -> bool:
        return not self._exps

    def __mul__(self, other: "FactoredValue") -> "FactoredValue":
        if not isinstance(other, FactoredValue):
            return NotImplemented
        exps = dict(self._exps)
        for p, e in other._exps:
            exps[p] = exps.get(p, 0) + e
        return FactoredValue(exps)

    def __truediv__(self, other: "FactoredValue") -> "FactoredValue":
        if not isinstance(other, FactoredValue):
            return NotImplemented
        return self * other ** -1

    def __pow__(self, k: Rational) -> "FactoredValue":
        k = Fraction(k)
        return FactoredValue({p: e * k for p, e in self._exps})

    def compare(self, other: "FactoredValue") -> int:
        """Exact three-way comparison with no floating point."""
        d = (self / other)._exps
        if not d:
            return 0
        D = math.lcm(*(e.denominator for _, e in d))
        num = den = 1
        for p, e in d:
            k = e * D
            if k > 0:
                num *= p ** int(k)
            else:
                den *= p ** int(-k)
        return (num > den) - (num < den)

    def __eq__(self, other) -> bool:
        if isinstance(other, FactoredValue):
            return self._exps == other._exps
        if isinstance(other, (int, Fraction)):
            return other > 0 and self._exps == FactoredValue.from_fraction(other)._exps
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            if other <= 0:
                return False
            other = FactoredValue.from_fraction(other)
        if not isinstance(other, FactoredValue):
            return NotImplemented
        return self.compare(other) < 0

    def __hash__(self) -> int:
        return self._hash

    def log(self) -> float:
        return sum(float(e) * math.log(p) for p, e in self._exps)

    def __float__(self) -> float:
        return math.exp(self.log())

    def as_fraction(self) -> Fraction | None:
        """The exact rational value, or None when it is irrational."""
        if any(e.denominator != 1 for _, e in self._exps):
            return None
        out = Fraction(1)
        for p, e in self._exps:
            out *= Fraction(p) ** int(e)
        return out

    def __str__(self) -> str:
        if not self._exps:
            return "1"
        parts = []
        for p, e in self._exps:
            if e == 1:
                parts.append(f"{p}")
            elif e.denominator == 1:
                parts.append(f"{p}^{e.numerator}" if e > 0 else f"{p}^({e.numerator})")
            else:
                parts.append(f"{p}^({e})")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"FactoredValue({str(self)!r})"

    def to_json(self) -> dict[str, str]:
        return {str(p): str(e) for p, e in self._exps}


def fmax(values) -> FactoredValue:
    it = iter(values)
    best = next(it)
    for v in it:
        if v.compare(best) > 0:
            best = v
    return best
