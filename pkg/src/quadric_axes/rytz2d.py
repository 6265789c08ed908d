"""Modified Rytz construction on a pair of conjugate semi-diameters.

With the ellipse centre at O and conjugate semi-diameters OP, OQ:

* the normal at P is the perpendicular to OQ through P; M and L are the two
  points on it at distance |OQ| from P (L is the reflection of M at P);
* the axes are the two bisectors of the angle L-O-M;
* the parallels through P to the bisectors cut the line OM in T and P'
  and |OT|, |OP'| are the semi-axis lengths.

With P = (a cos t, b sin t) one finds |OM| = |a - b| and |OL| = a + b, and the
parallel to one bisector yields the length of the *other* axis; the trace
records which bisector turned out major.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .conjugate import ConjugateSystem
from .errors import DegenerateError

PRINCIPAL_TOL = 1e-12
# below this sine the parallel-through-P meets OM too obliquely to be trusted
OBLIQUE_SIN = 1e-4


def _rot90(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


def _intersect(p0, d0, p1, d1) -> np.ndarray:
    """Intersection of the lines p0 + s d0 and p1 + t d1 in the plane."""
    A = np.column_stack([d0, -d1])
    s, _ = np.linalg.solve(A, p1 - p0)
    return p0 + s * d0


@dataclass
class RytzTrace:
    P: np.ndarray
    Q: np.ndarray
    M: np.ndarray
    L: np.ndarray
    T: np.ndarray | None
    Pprime: np.ndarray | None
    axis_dirs: np.ndarray            # columns: major, minor
    axis_lengths: tuple[float, float]  # (major, minor)
    branch: str = "general"
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def arr(v):
            return None if v is None else [float(x) for x in v]
        return {
            "P": arr(self.P), "Q": arr(self.Q), "M": arr(self.M), "L": arr(self.L),
            "T": arr(self.T), "Pprime": arr(self.Pprime),
            "axis_dirs": [arr(self.axis_dirs[:, 0]), arr(self.axis_dirs[:, 1])],
            "axis_lengths": list(self.axis_lengths),
            "branch": self.branch,
            "notes": list(self.notes),
        }


def rytz_axes(P, Q) -> RytzTrace:
    """Axes of the ellipse carrying the conjugate semi-diameters OP, OQ."""
    P = np.asarray(P, dtype=float).reshape(2)
    Q = np.asarray(Q, dtype=float).reshape(2)
    nP, nQ = float(np.hypot(*P)), float(np.hypot(*Q))
    cross = P[0] * Q[1] - P[1] * Q[0]
    if nP == 0.0 or nQ == 0.0 or abs(cross) <= 1e-12 * nP * nQ:
        raise DegenerateError("degenerate conjugate pair", step="rytz")

    Qstar = _rot90(Q)
    M = P + Qstar
    L = P - Qstar

    if abs(float(P @ Q)) <= PRINCIPAL_TOL * nP * nQ:
        # M, L lie on line OP: the pair is already principal
        dirs = [P / nP, Q / nQ]
        lens = [nP, nQ]
        order = [0, 1] if nP >= nQ else [1, 0]
        return RytzTrace(P, Q, M, L, None, None,
                         np.column_stack([dirs[k] for k in order]),
                         (lens[order[0]], lens[order[1]]),
                         branch="principal",
                         notes=["OP is perpendicular to OQ; bisector step bypassed"])

    nM, nL = float(np.hypot(*M)), float(np.hypot(*L))
    m_hat, l_hat = M / nM, L / nL
    s, d = m_hat + l_hat, m_hat - l_hat
    # the longer of the two is the better-conditioned bisector
    if np.hypot(*s) >= np.hypot(*d):
        b1 = s / np.hypot(*s)
    else:
        b1 = _rot90(d / np.hypot(*d))
    b2 = _rot90(b1)

    # parallel through P to b1 meets OM at T, parallel to b2 meets it at P'
    notes = []
    sin1 = abs(b1[0] * m_hat[1] - b1[1] * m_hat[0])
    sin2 = abs(b2[0] * m_hat[1] - b2[1] * m_hat[0])
    if min(sin1, sin2) > OBLIQUE_SIN:
        T = _intersect(P, b1, np.zeros(2), m_hat)
        Pp = _intersect(P, b2, np.zeros(2), m_hat)
        len_b2 = float(np.hypot(*T))   # parallel to b1 measures the axis along b2
        len_b1 = float(np.hypot(*Pp))
    else:
        T = Pp = None
        # |OL| = a + b and |OM| = |a - b|; P decides which bisector is major
        big, small = 0.5 * (nL + nM), 0.5 * abs(nL - nM)
        r1 = abs((P @ b1) ** 2 / big ** 2 + (P @ b2) ** 2 / small ** 2 - 1.0)
        r2 = abs((P @ b1) ** 2 / small ** 2 + (P @ b2) ** 2 / big ** 2 - 1.0)
        len_b1, len_b2 = (big, small) if r1 <= r2 else (small, big)
        notes.append("T, P' skipped: parallels meet OM too obliquely; lengths from |OL| +- |OM|")

    if len_b1 >= len_b2:
        dirs = np.column_stack([b1, b2])
        lens = (len_b1, len_b2)
        notes.append("major axis: bisector whose parallel through P gives T")
    else:
        dirs = np.column_stack([b2, b1])
        lens = (len_b2, len_b1)
        notes.append("major axis: bisector whose parallel through P gives P'")
    return RytzTrace(P, Q, M, L, T, Pp, dirs, lens, notes=notes)


def section_basis(u, v) -> np.ndarray:
    """Orthonormal basis (3x2, columns) of span(u, v), first column along u."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    e1 = u / np.linalg.norm(u)
    w = v - (v @ e1) * e1
    nw = np.linalg.norm(w)
    if nw <= 1e-12 * np.linalg.norm(v):
        raise DegenerateError("section plane is not spanned", step="section")
    return np.column_stack([e1, w / nw])


def section_ellipse(sys: ConjugateSystem, j: int, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Express diameters j, k in an orthonormal basis of their plane.

    Returns ``(basis, p2, q2)`` with ``basis`` the 3x2 matrix of the plane
    basis and ``p2``, ``q2`` the 2D coordinates, a conjugate pair of the
    section ellipse.
    """
    X = sys.X
    B = section_basis(X[:, j], X[:, k])
    return B, B.T @ X[:, j], B.T @ X[:, k]


def rytz_in_plane(basis: np.ndarray, P2, Q2) -> tuple[RytzTrace, np.ndarray, tuple[float, float]]:
    """Run Rytz on a section pair and lift the axis directions back to 3D."""
    tr = rytz_axes(P2, Q2)
    dirs3 = basis @ tr.axis_dirs
    return tr, dirs3, tr.axis_lengths
