"""Dense univariate polynomials over exact fields (Fraction or QuadFieldElem)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from ..errors import InputError


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class Poly:
    """``sum(coeffs[i] * x**i)`` with trailing (leading-degree) zeros trimmed."""

    coeffs: tuple

    def __post_init__(self):
        c = [Fraction(x) if isinstance(x, int) else x for x in self.coeffs]
        if any(isinstance(x, float) for x in c):
            raise InputError("exact polynomials do not take float coefficients")
        while c and _is_zero(c[-1]):
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_descending(cls, coeffs: Sequence[Any]) -> "Poly":
        return cls(tuple(reversed(list(coeffs))))

    @classmethod
    def x(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    def descending(self) -> list:
        return list(reversed(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        if self.is_zero:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, t):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly((other,))

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(tuple(self[i] + o[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.is_zero or o.is_zero:
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly((Fraction(1),))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def scale(self, k) -> "Poly":
        return Poly(tuple(c * k for c in self.coeffs))

    def monic(self) -> "Poly":
        return self.scale(Fraction(1) / self.lead)

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv = other.lead
        while len(rem) >= len(other.coeffs) and rem:
            k = len(rem) - len(other.coeffs)
            f = rem[-1] / inv
            q[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - f * c
            rem.pop()
            while rem and _is_zero(rem[-1]):
                rem.pop()
        return Poly(tuple(q)), Poly(tuple(rem))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.monic() if not a.is_zero else a

    def shift(self, h) -> "Poly":
        """The polynomial p(x + h)."""
        out = Poly(())
        xh = Poly((h, Fraction(1)))
        for c in reversed(self.coeffs):
            out = out * xh + c
        return out

    def primitive(self) -> "Poly":
        """Integer polynomial with content 1 and positive leading coefficient."""
        if self.is_zero:
            return self
        cs = [Fraction(c) for c in self.coeffs]
        den = 1
        for c in cs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in cs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        sign = 1 if ints[-1] > 0 else -1
        return Poly(tuple(Fraction(sign * v // g) for v in ints))

    def is_proportional(self, other: "Poly") -> bool:
        if self.degree != other.degree:
            return False
        if self.is_zero:
            return other.is_zero
        r = self.lead / other.lead
        return all(a == r * b for a, b in zip(self.coeffs, other.coeffs))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if _is_zero(c):
                continue
            cs = f"({c})" if not isinstance(c, Fraction) else str(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            parts.append(cs if not mono else (mono if c == 1 else f"{cs}*{mono}"))
        return " + ".join(parts)

    def to_json(self) -> list:
        def one(c):
            return c.to_json() if hasattr(c, "to_json") else str(c)
        return [one(c) for c in self.descending()]


def poly_from_ints(desc: Iterable[int]) -> Poly:
    return Poly.from_descending([Fraction(c) for c in desc])


class BiPoly:
    """Sparse polynomial in two variables (lam, nu) with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    def __add__(self, other: "BiPoly") -> "BiPoly":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, Fraction(0)) + v
        return BiPoly(t)

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.terms == other.terms

    def scale(self, k) -> "BiPoly":
        return BiPoly({m: v * k for m, v in self.terms.items()})

    def __call__(self, lam, nu):
        return sum((v * Fraction(lam) ** i * Fraction(nu) ** j for (i, j), v in self.terms.items()), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def deg_lam(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def in_lam(self, nu) -> Poly:
        """Univariate polynomial in lam at a fixed rational nu."""
        n = self.deg_lam()
        cs = [Fraction(0)] * (n + 1)
        for (i, j), v in self.terms.items():
            cs[i] += v * Fraction(nu) ** j
        return Poly(tuple(cs))

    def coeff_in_lam(self, i: int) -> Poly:
        """Coefficient of lam^i, as a polynomial in nu."""
        n = max((j for (k, j) in self.terms if k == i), default=-1)
        cs = [Fraction(0)] * (n + 1)
        for (k, j), v in self.terms.items():
            if k == i:
                cs[j] += v
        return Poly(tuple(cs))

    def divide_lam(self) -> "BiPoly | None":
        """self / lam when lam divides self, else None."""
        if any(i == 0 for i, _ in self.terms):
            return None
        return BiPoly({(i - 1, j): v for (i, j), v in self.terms.items()})

    def only_even_lam(self) -> bool:
        return all(i % 2 == 0 for i, _ in self.terms)

    def is_proportional(self, other: "BiPoly") -> bool:
        if set(self.terms) != set(other.terms):
            return False
        if not self.terms:
            return True
        k = next(iter(self.terms))
        r = self.terms[k] / other.terms[k]
        return all(self.terms[m] == r * other.terms[m] for m in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), v in sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
            mono = "*".join(p for p in ((f"lam^{i}" if i > 1 else "lam") if i else "",
                                        (f"nu^{j}" if j > 1 else "nu") if j else "") if p)
            parts.append(f"{v}*{mono}" if mono else str(v))
        return " + ".join(parts)
