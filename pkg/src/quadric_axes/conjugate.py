"""Complete systems of conjugate semi-diameters and their matrix invariants.

A system is stored as the matrix ``X`` whose columns are the semi-diameters.
For an ellipsoid with semi-axes ``A = diag(a)`` in the orthonormal frame ``F``
every complete conjugate system has the form ``X = F A O`` with ``O``
orthogonal, which gives ``X X^T = F A^2 F^T`` (the spectral oracle) and the
trace/determinant invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, InputError
from .numkernel import canonical_sign, line_angle, sym_eigen, unit


@dataclass(frozen=True)
class Ellipsoid:
    """Central ellipsoid with semi-axes ``a_1 >= ... >= a_n > 0``.

    ``frame`` holds the axis directions as columns (identity when the
    ellipsoid is in canonical position).
    """

    semi_axes: tuple[float, ...]
    frame: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        a = tuple(float(x) for x in self.semi_axes)
        if len(a) < 2:
            raise InputError("ellipsoid needs at least two semi-axes")
        if not all(math.isfinite(x) and x > 0 for x in a):
            raise InputError("semi-axes must be positive and finite")
        if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
            raise InputError("semi-axes must be sorted decreasing")
        object.__setattr__(self, "semi_axes", a)
        if self.frame is None:
            object.__setattr__(self, "frame", np.eye(len(a)))
        else:
            f = np.asarray(self.frame, dtype=float)
            if f.shape != (len(a), len(a)) or not np.allclose(f.T @ f, np.eye(len(a)), atol=1e-10):
                raise InputError("ellipsoid frame must be an orthonormal matrix")
            object.__setattr__(self, "frame", f)

    @property
    def n(self) -> int:
        return len(self.semi_axes)

    @property
    def strict(self) -> bool:
        a = self.semi_axes
        return all(a[i] > a[i + 1] for i in range(len(a) - 1))

    @property
    def squares(self) -> np.ndarray:
        return np.asarray(self.semi_axes) ** 2

    def to_canonical(self, x) -> np.ndarray:
        return self.frame.T @ np.asarray(x, dtype=float)

    def from_canonical(self, x) -> np.ndarray:
        return self.frame @ np.asarray(x, dtype=float)

    def quadric_matrix(self) -> np.ndarray:
        """Matrix M of the ellipsoid x^T M x = 1 in world coordinates."""
        return self.frame @ np.diag(1.0 / self.squares) @ self.frame.T


@dataclass(frozen=True)
class ConjugateSystem:
    """n semi-diameters stored as the columns of ``X``."""

    X: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] < 2:
            raise InputError("conjugate system must be a square matrix of n >= 2 columns")
        if not np.all(np.isfinite(X)):
            raise InputError("non-finite semi-diameter entry")
        X.setflags(write=False)
        object.__setattr__(self, "X", X)
        norms = np.linalg.norm(X, axis=0)
        if np.any(norms == 0.0) or abs(np.linalg.det(X)) <= 1e-12 * float(np.prod(norms)):
            raise DegenerateError("degenerate conjugate system", step="conjugate")

    @classmethod
    def from_rows(cls, rows) -> "ConjugateSystem":
        """Build from a list of semi-diameters (one per row)."""
        return cls(np.asarray(rows, dtype=float).T)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def diameters(self) -> list[np.ndarray]:
        return [self.X[:, i].copy() for i in range(self.n)]


@dataclass(frozen=True)
class AxesResult:
    """Principal directions (columns) and semi-axis lengths, sorted decreasing."""

    directions: np.ndarray
    lengths: tuple[float, ...]
    provenance: str

    def __post_init__(self):
        D = np.asarray(self.directions, dtype=float)
        L = np.asarray(self.lengths, dtype=float)
        order = np.argsort(-L, kind="stable")
        D = D[:, order]
        D = np.column_stack([canonical_sign(D[:, i]) for i in range(D.shape[1])])
        if not np.allclose(D.T @ D, np.eye(D.shape[1]), atol=1e-10):
            raise DegenerateError("axis directions are not orthonormal", step=self.provenance)
        object.__setattr__(self, "directions", D)
        object.__setattr__(self, "lengths", tuple(float(x) for x in L[order]))

    def compare(self, other: "AxesResult", rel_gap: float = 1e-6) -> dict:
        """Length relative errors and per-axis direction angles against ``other``.

        Axes whose lengths are repeated (relative gap below ``rel_gap``) are
        compared as subspaces: the angle reported is the largest principal
        angle between the spans.
        """
        a = np.asarray(self.lengths)
        b = np.asarray(other.lengths)
        rel = np.abs(a - b) / np.abs(b)
        angles = []
        n = len(a)
        i = 0
        while i < n:
            j = i + 1
            while j < n and abs(b[j] - b[j - 1]) <= rel_gap * b[j - 1]:
                j += 1
            if j - i == 1:
                angles.append(line_angle(self.directions[:, i], other.directions[:, i]))
            else:
                A = self.directions[:, i:j]
                B = other.directions[:, i:j]
                # largest principal angle; arcsin keeps precision near zero
                resid = A - B @ (B.T @ A)
                s = np.linalg.norm(resid, 2) if j - i < n else 0.0
                ang = float(np.arcsin(min(1.0, s)))
                angles.extend([ang] * (j - i))
            i = j
        return {
            "length_rel_err": rel.tolist(),
            "max_length_rel_err": float(rel.max()),
            "angles": angles,
            "max_angle": float(max(angles)),
        }


def implied_quadric(sys: ConjugateSystem) -> np.ndarray:
    """Matrix M = (X X^T)^-1 of the ellipsoid carrying the system."""
    X = sys.X
    M = np.linalg.inv(X @ X.T)
    return 0.5 * (M + M.T)


def check_conjugacy(e, f, ell: Ellipsoid) -> float:
    """sum e_i f_i / a_i^2 in the ellipsoid's canonical frame; zero iff conjugate."""
    e = np.asarray(e, dtype=float)
    f = np.asarray(f, dtype=float)
    if not np.any(e) or not np.any(f):
        raise InputError("conjugacy needs nonzero directions")
    ec = ell.to_canonical(e)
    fc = ell.to_canonical(f)
    return float(np.sum(ec * fc / ell.squares))


def sum_of_squares(sys: ConjugateSystem) -> float:
    return float(np.sum(sys.X ** 2))


def volume(sys: ConjugateSystem) -> float:
    return float(np.linalg.det(sys.X))


def random_rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random element of SO(n)."""
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_system(ell: Ellipsoid, seed=None, *, rotate: bool = True,
                  mix: bool = True) -> tuple[ConjugateSystem, Ellipsoid]:
    """Random complete conjugate system of ``ell``.

    Returns the system ``X = Q A O`` together with the ellipsoid placed in the
    frame ``Q`` (``Q = ell.frame`` when ``rotate`` is false, ``O = I`` when
    ``mix`` is false).
    """
    rng = np.random.default_rng(seed)
    n = ell.n
    Q = random_rotation(rng, n) if rotate else ell.frame
    O = random_rotation(rng, n) if mix else np.eye(n)
    X = Q @ np.diag(ell.semi_axes) @ O
    return ConjugateSystem(X), Ellipsoid(ell.semi_axes, Q)


def axes_oracle(sys: ConjugateSystem) -> AxesResult:
    """Axes from the spectral decomposition of X X^T (eigenvalues a_i^2)."""
    X = sys.X
    G = X @ X.T
    if X.shape[0] in (2, 3):
        vals, vecs = sym_eigen(G)
    else:
        vals, vecs = np.linalg.eigh(G)
        vals, vecs = vals[::-1], vecs[:, ::-1]
    if np.any(vals <= 0):
        raise DegenerateError("degenerate conjugate system", step="oracle")
    return AxesResult(vecs, tuple(np.sqrt(vals)), "oracle")


def direction_basis(v) -> np.ndarray:
    """Orthonormal basis of the plane orthogonal to a 3-vector (as columns)."""
    v = unit(v)
    k = int(np.argmin(np.abs(v)))
    e = np.zeros(3)
    e[k] = 1.0
    u1 = unit(np.cross(v, e))
    u2 = np.cross(v, u1)
    return np.column_stack([u1, u2])
