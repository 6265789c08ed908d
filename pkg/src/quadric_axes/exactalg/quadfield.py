"""Exact rationals and the real quadratic fields Q(sqrt d)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ..errors import InputError

Rat = Fraction


def rat(value) -> Fraction:
    """Exact rational from an int, Fraction or "p/q" string; floats are refused."""
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE") or not text:
            raise InputError(f"expected an exact fraction p/q, got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"expected an exact fraction p/q, got {value!r}") from None
    raise InputError(f"expected an exact rational, got {type(value).__name__}")


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def squarefree_decomposition(q: Fraction, trial_limit: int = 10 ** 6) -> tuple[Fraction, int]:
    """Write a positive rational as ``s^2 * d`` with d a squarefree integer.

    Returns ``(s, d)``. Uses trial division; the cofactor left after
    ``trial_limit`` must be 1, a perfect square or provably prime.
    """
    q = Fraction(q)
    if q <= 0:
        raise InputError("squarefree decomposition needs a positive rational")
    n = q.numerator * q.denominator
    root, d = 1, 1
    p = 2
    while p * p <= n and p <= trial_limit:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        root *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            root *= r
        elif n < trial_limit * trial_limit:
            d *= n
        else:
            raise InputError("cofactor too large to decide squarefreeness")
    return Fraction(root, q.denominator), d


def _coerce(x, d: int) -> "QuadFieldElem":
    if isinstance(x, QuadFieldElem):
        if x.d != d:
            raise InputError(f"mixing Q(sqrt {x.d}) and Q(sqrt {d})")
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return QuadFieldElem(d, Fraction(x), Fraction(0))
    return NotImplemented


@dataclass(frozen=True)
class QuadFieldElem:
    """The number ``lam + nu * sqrt(d)`` with rational lam, nu."""

    d: int
    lam: Fraction
    nu: Fraction

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2 or not is_squarefree(self.d):
            raise InputError(f"d must be a squarefree integer > 1, got {self.d!r}")
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "nu", Fraction(self.nu))

    @classmethod
    def sqrt(cls, d: int) -> "QuadFieldElem":
        return cls(d, Fraction(0), Fraction(1))

    @property
    def is_rational(self) -> bool:
        return self.nu == 0

    def conjugate(self) -> "QuadFieldElem":
        return QuadFieldElem(self.d, self.lam, -self.nu)

    def norm(self) -> Fraction:
        return self.lam * self.lam - self.d * self.nu * self.nu

    def __add__(self, other):
        o = _coerce(other, self.d)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.d, self.lam + o.lam, self.nu + o.nu)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem(self.d, -self.lam, -self.nu)

    def __sub__(self, other):
        o = _coerce(other, self.d)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.d, self.lam - o.lam, self.nu - o.nu)

    def __rsub__(self, other):
        o = _coerce(other, self.d)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _coerce(other, self.d)
        if o is NotImplemented:
            return o
        return QuadFieldElem(self.d, self.lam * o.lam + self.d * self.nu * o.nu,
                             self.lam * o.nu + self.nu * o.lam)

    __rmul__ = __mul__

    def inverse(self) -> "QuadFieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in Q(sqrt d)")
        return QuadFieldElem(self.d, self.lam / n, -self.nu / n)

    def __truediv__(self, other):
        o = _coerce(other, self.d)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other, self.d)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = QuadFieldElem(self.d, Fraction(1), Fraction(0))
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, QuadFieldElem):
            return self.d == other.d and self.lam == other.lam and self.nu == other.nu
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self.nu == 0 and self.lam == other
        return NotImplemented

    def __hash__(self):
        if self.nu == 0:
            return hash(self.lam)
        return hash((self.d, self.lam, self.nu))

    def __float__(self) -> float:
        return float(self.lam) + float(self.nu) * math.sqrt(self.d)

    def __repr__(self) -> str:
        return f"QuadFieldElem({self.d}, {self.lam}, {self.nu})"

    def __str__(self) -> str:
        if self.nu == 0:
            return str(self.lam)
        surd = f"{self.nu}*sqrt({self.d})" if self.nu != 1 else f"sqrt({self.d})"
        if self.lam == 0:
            return surd
        return f"{self.lam} + {surd}"

    def to_json(self) -> dict:
        return {"d": self.d, "lam": str(self.lam), "nu": str(self.nu)}
