"""Small dense linear algebra and low-degree real root finding.

Vectors and symmetric matrices are plain numpy arrays; this module only adds
the conventions the geometric code relies on (decreasing eigenvalue order,
canonical signs, root merging with multiplicity flags).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InputError

MERGE_REL = 1e-7
NEWTON_STEPS = 3


def as_vector(v, n: int | None = None) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if n is not None and arr.shape[0] != n:
        raise InputError(f"expected a {n}-vector, got {arr.shape[0]} entries")
    if not np.all(np.isfinite(arr)):
        raise InputError("non-finite vector entry")
    return arr


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise InputError("zero vector has no direction")
    return v / nrm


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so that its largest-magnitude component is positive."""
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def line_angle(u, v) -> float:
    """Angle in [0, pi/2] between the unoriented lines spanned by u and v."""
    u = unit(u)
    v = unit(v)
    if u.shape[0] == 2:
        cross = abs(u[0] * v[1] - u[1] * v[0])
    else:
        cross = np.linalg.norm(np.cross(u, v))
    return math.atan2(cross, abs(float(u @ v)))


def sym_eigen(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric 2x2 or 3x3 matrix.

    Returns ``(values, vectors)`` with values sorted decreasing and the
    matching orthonormal eigenvectors as columns.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 3):
        raise InputError("invalid matrix: expected 2x2 or 3x3")
    if not np.all(np.isfinite(m)):
        raise InputError("invalid matrix")
    # symmetric by construction: only the upper triangle is read
    upper = np.triu(m)
    sym = upper + np.triu(m, 1).T
    vals, vecs = np.linalg.eigh(sym, UPLO="U")
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


@dataclass(frozen=True)
class RealPoly:
    """Real polynomial sum(coeffs[i] * t**i) of degree at most 4."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = [float(x) for x in self.coeffs]
        if not all(math.isfinite(x) for x in c):
            raise InputError("non-finite polynomial coefficient")
        while c and c[-1] == 0.0:
            c.pop()
        if len(c) > 5:
            raise InputError("degree above 4 is not supported")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_descending(cls, coeffs: Sequence[float]) -> "RealPoly":
        return cls(tuple(reversed([float(x) for x in coeffs])))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = 0.0 * t
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "RealPoly":
        return RealPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def scale_at(self, t: float) -> float:
        """Magnitude scale used for residual tests: sum |c_i| |t|^i."""
        return sum(abs(c) * abs(t) ** i for i, c in enumerate(self.coeffs))


class Root(NamedTuple):
    value: float
    multiplicity: int


def _polish(p: RealPoly, dp: RealPoly, r: float) -> float:
    for _ in range(NEWTON_STEPS):
        d = dp(r)
        if d == 0.0:
            break
        step = p(r) / d
        nr = r - step
        if not math.isfinite(nr) or abs(p(nr)) > abs(p(r)):
            break
        r = nr
    return r


def _quadratic_roots(c: float, b: float, a: float) -> list[complex]:
    disc = b * b - 4.0 * a * c
    if disc >= 0.0:
        s = math.sqrt(disc)
        q = -0.5 * (b + math.copysign(s, b))
        if q == 0.0:
            return [0.0, 0.0]
        return [q / a, c / q]
    s = math.sqrt(-disc)
    return [complex(-b / (2 * a), s / (2 * a)), complex(-b / (2 * a), -s / (2 * a))]


def real_roots(p: RealPoly, bracket_hint: tuple[float, float] | None = None,
               tol: float = 1e-9) -> list[Root]:
    """Real roots of a polynomial of degree <= 4, sorted, with multiplicities.

    Quadratics use the cancellation-free closed form; cubics and quartics take
    the companion-matrix eigenvalues. Every candidate is Newton-polished and
    candidates closer than ``MERGE_REL * scale`` are merged into one root whose
    multiplicity counts the merged members. Candidates with an imaginary part
    below the merge threshold are treated as (near) double real roots.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    if p.degree < 0 or all(c == 0.0 for c in p.coeffs):
        raise InputError("degenerate polynomial")
    if p.degree == 0:
        return []
    c = p.coeffs
    if p.degree == 1:
        cands: list[complex] = [-c[0] / c[1]]
    elif p.degree == 2:
        cands = _quadratic_roots(*c)
    else:
        cands = list(np.roots(list(reversed(c))))

    mags = [abs(z) for z in cands]
    scale = max(1.0, max(mags)) if mags else 1.0
    merge = MERGE_REL * scale
    dp = p.derivative()
    reals = []
    for z in cands:
        z = complex(z)
        if abs(z.imag) <= merge:
            reals.append(_polish(p, dp, z.real))
    reals.sort()

    merged: list[Root] = []
    for r in reals:
        if merged and abs(r - merged[-1].value) <= merge:
            prev = merged[-1]
            k = prev.multiplicity
            merged[-1] = Root((prev.value * k + r) / (k + 1), k + 1)
        else:
            merged.append(Root(r, 1))

    out = []
    for root in merged:
        if bracket_hint is not None:
            lo, hi = bracket_hint
            if not (lo - merge <= root.value <= hi + merge):
                continue
        if root.multiplicity == 1 and abs(p(root.value)) > tol * max(p.scale_at(root.value), 1e-300):
            # companion eigenvalue that Newton could not confirm
            continue
        out.append(root)
    return out
