"""Exhaustive search for rational roots of rational polynomials.

Small coefficients use the classical candidate list p/q with p dividing the
constant term and q the leading coefficient. Large ones isolate the real roots
with a Sturm sequence and recover the unique candidate fraction in each
isolating interval, which is exhaustive as well: distinct fractions with
denominators dividing the leading coefficient ``l`` are at least ``1/l^2``
apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InputError
from .poly import Poly

DIVISOR_LIMIT = 10 ** 9
# candidate lists longer than this are summarised in the witness
WITNESS_CAP = 64


def divisors(n: int) -> list[int]:
    """Positive divisors of n, ascending, from its trial-division factorisation."""
    n = abs(n)
    if n == 0:
        raise InputError("zero has no finite divisor list")
    out = [1]
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out = [d * p ** k for d in out for k in range(e + 1)]
        p += 1 if p == 2 else 2
    if n > 1:
        out = out + [d * n for d in out]
    return sorted(out)


@dataclass
class RationalRootReport:
    poly: Poly                      # primitive integer form that was searched
    roots: list[Fraction]           # distinct rational roots
    multiplicities: list[int]
    method: str                     # "divisors" | "sturm"
    candidates_tested: int
    candidates: list[Fraction] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def has_root(self) -> bool:
        return bool(self.roots)

    def to_json(self) -> dict:
        return {
            "poly": self.poly.to_json(),
            "roots": [str(r) for r in self.roots],
            "multiplicities": self.multiplicities,
            "method": self.method,
            "candidates_tested": self.candidates_tested,
            "candidates": [str(c) for c in self.candidates],
            "notes": self.notes,
        }


def _int_coeffs(p: Poly) -> list[int]:
    return [int(c) for c in p.primitive().coeffs]


def _eval_int(cs: list[int], num: int, den: int) -> int:
    """den^n * p(num/den) for integer coefficients (ascending)."""
    n = len(cs) - 1
    acc = 0
    for i, c in enumerate(cs):
        acc += c * num ** i * den ** (n - i)
    return acc


def _candidates_by_divisors(cs: list[int]) -> tuple[list[Fraction], list[Fraction]]:
    lead, const = cs[-1], cs[0]
    p1 = sum(cs)
    m1 = sum(c * (-1) ** i for i, c in enumerate(cs))
    found, tested = [], []
    seen = set()
    const_divs = divisors(const)
    for q in divisors(lead):
        for p in const_divs:
            if math.gcd(p, q) != 1:
                continue
            for s in (p, -p):
                r = Fraction(s, q)
                if r in seen:
                    continue
                seen.add(r)
                # (q x - s) divides the integer polynomial, so (q - s) | P(1), (q + s) | P(-1)
                if (q - s) != 0 and p1 % (q - s) != 0:
                    tested.append(r)
                    continue
                if (q + s) != 0 and m1 % (q + s) != 0:
                    tested.append(r)
                    continue
                tested.append(r)
                if _eval_int(cs, s, q) == 0:
                    found.append(r)
    return sorted(found), tested


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero and seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if r.is_zero:
            break
        seq.append(-r)
    return seq


def _sign_changes(seq: list[Poly], t: Fraction) -> int:
    signs = [s for s in (q(t) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint half-open intervals (lo, hi] each holding one real root of a squarefree p."""
    seq = sturm_sequence(p)
    lead = abs(Fraction(p.lead))
    bound = 1 + max(abs(Fraction(c)) for c in p.coeffs[:-1]) / lead if p.degree > 0 else Fraction(1)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.extend([(lo, mid), (mid, hi)])
    return sorted(out)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _float_bracket(p: Poly, lo: Fraction, hi: Fraction, s_lo: int):
    """Narrow (lo, hi] with float bisection; the result is re-checked exactly."""
    try:
        cs = [float(c) for c in p.coeffs]
        a, b = float(lo), float(hi)
    except OverflowError:
        return lo, hi

    def f(t):
        acc = 0.0
        for c in reversed(cs):
            acc = acc * t + c
        return acc

    for _ in range(80):
        m = 0.5 * (a + b)
        if not a < m < b:
            break
        if _sign(f(m)) == s_lo:
            a = m
        else:
            b = m
    pad = 4.0 * (abs(a) + abs(b)) * 2.0 ** -52 + 1e-300
    na, nb = max(Fraction(a - pad), lo), min(Fraction(b + pad), hi)
    if na < nb and _sign(p(na)) == s_lo and _sign(p(nb)) != s_lo:
        return na, nb
    return lo, hi


def _refine(p: Poly, lo: Fraction, hi: Fraction, width: Fraction):
    """Shrink an isolating interval of a simple root by sign bisection on p."""
    s_lo = _sign(p(lo))
    if s_lo == 0:
        return lo, lo
    if p(hi) == 0:
        return hi, hi
    lo, hi = _float_bracket(p, lo, hi, s_lo)
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if _sign(p(mid)) == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _candidates_by_sturm(p: Poly, cs: list[int]) -> tuple[list[Fraction], list[Fraction]]:
    sq = p // p.gcd(p.derivative()) if p.degree > 1 else p
    lead = abs(cs[-1])
    width = Fraction(1, 2 * lead * lead)
    found, tested = [], []
    for lo, hi in isolate_real_roots(sq):
        lo, hi = _refine(sq, lo, hi, width)
        cand = ((lo + hi) / 2).limit_denominator(lead)
        tested.append(cand)
        if p(cand) == 0:
            found.append(cand)
    return sorted(found), tested


def _multiplicity(p: Poly, r: Fraction) -> int:
    k = 0
    lin = Poly((-r, Fraction(1)))
    while not p.is_zero:
        q, rem = p.divmod(lin)
        if not rem.is_zero:
            break
        p = q
        k += 1
    return k


def rational_root_test(p: Poly) -> RationalRootReport:
    """All rational roots of p, found by an exhaustive and exactly verified search."""
    if p.is_zero:
        raise InputError("the zero polynomial has every number as a root")
    if any(not isinstance(c, Fraction) for c in p.coeffs):
        raise InputError("rational_root_test needs rational coefficients")
    prim = p.primitive()
    if prim.degree == 0:
        return RationalRootReport(prim, [], [], "divisors", 0)
    # factor out x^k
    cs = _int_coeffs(prim)
    zero_mult = 0
    while cs[0] == 0:
        cs.pop(0)
        zero_mult += 1
    core = Poly(tuple(Fraction(c) for c in cs))
    notes = []
    if core.degree == 0:
        found, tested, method = [], [], "divisors"
    elif max(abs(cs[0]), abs(cs[-1])) <= DIVISOR_LIMIT:
        found, tested = _candidates_by_divisors(cs)
        method = "divisors"
    else:
        found, tested = _candidates_by_sturm(core, cs)
        method = "sturm"
        notes.append("coefficients too large for divisor enumeration: real roots isolated exactly")
    roots = ([Fraction(0)] if zero_mult else []) + found
    mults = ([zero_mult] if zero_mult else []) + [_multiplicity(core, r) for r in found]
    order = sorted(range(len(roots)), key=lambda i: roots[i])
    witness = tested if len(tested) <= WITNESS_CAP else tested[:WITNESS_CAP]
    if len(tested) > WITNESS_CAP:
        notes.append(f"{len(tested)} candidates tested; first {WITNESS_CAP} listed")
    return RationalRootReport(prim, [roots[i] for i in order], [mults[i] for i in order],
                              method, len(tested), witness, notes)
