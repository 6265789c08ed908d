"""Chasles's construction of the axes of an ellipsoid from conjugate semi-diameters.

Steps, for semi-diameters OP, OQ, OR (O the centre, placed at the origin):

1. Frame at P: the unit normal n1 of the plane OQR and the axes n2 (minor,
   semi-axis rho2) and n3 (major, rho3) of the section ellipse of that plane,
   obtained by the modified Rytz construction.
2. The confocal system dual to the ellipsoid's is centred at P with principal
   axes n1, n2, n3. Its focal conics are, in frame coordinates (x, y, z):

       ellipse    x^2/(a+b) + y^2/b = 1,  z = 0
       hyperbola  x^2/a     - z^2/b = 1,  y = 0

   with a = rho2^2, b = rho3^2 - rho2^2.
3. The two cones with apex O through these conics share four edges; the
   diagonal triangle of the quadrangle they span gives the three axis lines,
   and the planes through P parallel to the principal planes cut the edges at
   distances equal to the semi-axes.

The edges are found by projecting the focal ellipse from O into the plane of
the hyperbola and intersecting. Eliminating x from the two conditions gives
``alpha y^2 - beta y - gamma = 0`` with

    alpha = ab - b x'^2 + (a+b) y'^2 + a z'^2
    beta  = 2 y' b (a - x' x)
    gamma = b^2 y'^2

and squaring out x gives a quartic in y. A variant with ``gamma = b y'^2`` is
also assembled (``quartic_printed``) because it is the form the
constructibility analysis works with; it does not vanish on the true
intersections, and the instance reports that.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .conjugate import AxesResult, ConjugateSystem, axes_oracle
from .confocal import ConeQuadric, SignedConic, common_edges_in_frame, focal_cone, shared_frame
from .errors import DegenerateError, InputError
from .numkernel import RealPoly, line_angle, real_roots, unit
from .rytz2d import RytzTrace, rytz_axes, section_ellipse

DEFAULT_TOL = 1e-8
# relative size of y' or z' below which the apex counts as lying in a conic plane
PLANE_EPS = 1e-9
# conditioning below which another diameter is tried as P
RETRY_BELOW = 1e-3


def pipeline_tol() -> float:
    """Construction residual tolerance, overridable with QUADRIC_AXES_TOL."""
    raw = os.environ.get("QUADRIC_AXES_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"QUADRIC_AXES_TOL must be a number, got {raw!r}")
    if not tol > 0:
        raise InputError("QUADRIC_AXES_TOL must be positive")
    return tol


def _vec(v) -> list[float]:
    return [float(x) for x in v]


# --------------------------------------------------------------------------
# step 1: frame


@dataclass
class ChaslesFrame:
    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    role: int
    n1: np.ndarray          # normal of the ellipsoid at P
    n2: np.ndarray          # minor axis of the section ellipse
    n3: np.ndarray          # major axis of the section ellipse
    rho2: float
    rho3: float
    rytz: RytzTrace
    orthogonality: float

    @property
    def basis(self) -> np.ndarray:
        return np.column_stack([self.n1, self.n2, self.n3])

    def coords(self, w) -> np.ndarray:
        """Frame coordinates (origin P) of a world point."""
        return self.basis.T @ (np.asarray(w, dtype=float) - self.P)

    def world(self, c) -> np.ndarray:
        return self.P + self.basis @ np.asarray(c, dtype=float)

    @property
    def apex(self) -> np.ndarray:
        """Frame coordinates (x', y', z') of the centre O."""
        return self.coords(np.zeros(3))

    def conditioning(self) -> float:
        """Scale-free distance from the degenerate configurations."""
        xp, yp, zp = self.apex
        nP = float(np.linalg.norm(self.P))
        gap = (self.rho3 ** 2 - self.rho2 ** 2) / self.rho3 ** 2
        return min(abs(yp) / nP, abs(zp) / nP, gap)

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "P": _vec(self.P), "Q": _vec(self.Q), "R": _vec(self.R),
            "n1": _vec(self.n1), "n2": _vec(self.n2), "n3": _vec(self.n3),
            "rho2": self.rho2, "rho3": self.rho3,
            "apex": _vec(self.apex),
            "orthogonality": self.orthogonality,
            "rytz": self.rytz.to_dict(),
        }


def build_frame(sys: ConjugateSystem, role: int = 0) -> ChaslesFrame:
    """Normal at P and section axes of the plane OQR (P = diameter ``role``)."""
    if sys.n != 3:
        raise InputError("Chasles's construction needs a 3D conjugate system")
    others = [k for k in range(3) if k != role]
    X = sys.X
    P, Q, R = X[:, role].copy(), X[:, others[0]].copy(), X[:, others[1]].copy()
    basis, q2, r2 = section_ellipse(sys, others[0], others[1])
    tr = rytz_axes(q2, r2)
    major = basis @ tr.axis_dirs[:, 0]
    minor = basis @ tr.axis_dirs[:, 1]
    n1 = unit(np.cross(Q, R))
    # orient every frame axis so that O has nonnegative frame coordinates
    n1 = n1 if P @ n1 <= 0 else -n1
    n2 = minor if P @ minor <= 0 else -minor
    n3 = major if P @ major <= 0 else -major
    B = np.column_stack([n1, n2, n3])
    orth = float(np.max(np.abs(B.T @ B - np.eye(3))))
    if orth > 1e-10:
        raise DegenerateError(f"frame not orthonormal (residual {orth:.2e})", step="build_frame")
    rho3, rho2 = tr.axis_lengths
    return ChaslesFrame(P, Q, R, role, n1, n2, n3, float(rho2), float(rho3), tr, orth)


# --------------------------------------------------------------------------
# step 2: dual focal conics


@dataclass
class DualFocalConics:
    ellipse: SignedConic
    hyperbola: SignedConic
    a: float
    b: float

    def to_dict(self) -> dict:
        return {"ellipse": self.ellipse.to_dict(), "hyperbola": self.hyperbola.to_dict(),
                "a": self.a, "b": self.b}


def dual_focal_conics(frame: ChaslesFrame) -> DualFocalConics:
    """Focal ellipse (rho3^2, rho3^2 - rho2^2) and hyperbola (rho2^2, rho2^2 - rho3^2) at P."""
    r2, r3 = frame.rho2 ** 2, frame.rho3 ** 2
    b = r3 - r2
    if not (frame.rho3 > frame.rho2 > 0) or b <= 1e-12 * r3:
        raise DegenerateError("section ellipse is a circle: dual focal conics degenerate",
                              step="dual_focal_conics")
    ell = SignedConic(frame.P.copy(), np.column_stack([frame.n1, frame.n2]), (r3, b), "dual focal ellipse")
    hyp = SignedConic(frame.P.copy(), np.column_stack([frame.n1, frame.n3]), (r2, -b), "dual focal hyperbola")
    return DualFocalConics(ell, hyp, r2, b)


# --------------------------------------------------------------------------
# central projection of the focal ellipse into the hyperbola plane


@dataclass
class ProjectedConic:
    """Conic A X^2 + B XZ + C Z^2 + D X + E Z + F = 0 in the hyperbola plane.

    (X, Z) are frame coordinates along n1 and n3.
    """

    coeffs: np.ndarray        # fitted, unit norm
    exact: np.ndarray | None  # closed form, unit norm and sign-matched
    kind: str
    fit_residual: float
    samples: np.ndarray
    annotations: dict[str, Any] = field(default_factory=dict)

    def __call__(self, X, Z):
        A, B, C, D, E, F = self.coeffs
        return A * X * X + B * X * Z + C * Z * Z + D * X + E * Z + F

    def to_dict(self) -> dict:
        return {
            "coeffs": _vec(self.coeffs),
            "exact": None if self.exact is None else _vec(self.exact),
            "kind": self.kind,
            "fit_residual": self.fit_residual,
            "annotations": {k: (None if v is None else _vec(v)) for k, v in self.annotations.items()},
        }


def _project(apex, x, y):
    """Image in the plane y = 0 of the focal-ellipse point (x, y, 0) seen from apex."""
    xp, yp, zp = apex
    t = yp / (yp - y)
    return np.array([xp + t * (x - xp), zp - t * zp])


def _conic_kind(c) -> str:
    A, B, C = c[0], c[1], c[2]
    disc = B * B - 4 * A * C
    scale = B * B + abs(4 * A * C)
    if abs(disc) <= 1e-10 * max(scale, 1e-300):
        return "parabola"
    return "ellipse" if disc < 0 else "hyperbola"


def project_focal_ellipse(conics: DualFocalConics, frame: ChaslesFrame, n_samples: int = 24) -> ProjectedConic:
    """Image E' of the focal ellipse under central projection from O, by a conic fit.

    Sample points whose projection ray is (nearly) parallel to the image plane
    are skipped. The fit is checked against the closed form obtained by
    back-projecting an image point onto the plane z = 0:
    ``(z'X - x'Z)^2/(a+b) + y'^2 Z^2 / b - (z' - Z)^2 = 0``.
    """
    a, b = conics.a, conics.b
    xp, yp, zp = frame.apex
    if abs(yp) <= PLANE_EPS * float(np.linalg.norm(frame.P)):
        raise DegenerateError("centre lies in the focal-hyperbola plane", step="project_focal_ellipse")
    sa, sb = math.sqrt(a + b), math.sqrt(b)
    pts = []
    for t in np.linspace(0.0, 2 * math.pi, n_samples, endpoint=False) + 0.1234:
        x, y = sa * math.cos(t), sb * math.sin(t)
        if abs(y - yp) <= 0.05 * sb:
            continue
        pts.append(_project((xp, yp, zp), x, y))
    if len(pts) < 5:
        raise DegenerateError("too few projectable ellipse points", step="project_focal_ellipse")
    S = np.array(pts)
    scale = max(1.0, float(np.max(np.abs(S))))
    Sn = S / scale
    Dm = np.column_stack([Sn[:, 0] ** 2, Sn[:, 0] * Sn[:, 1], Sn[:, 1] ** 2, Sn[:, 0], Sn[:, 1], np.ones(len(Sn))])
    _, sv, vt = np.linalg.svd(Dm)
    c = vt[-1]
    fit_res = float(sv[-1] / sv[0])
    # undo the normalisation X -> X/scale
    c = c * np.array([1 / scale ** 2, 1 / scale ** 2, 1 / scale ** 2, 1 / scale, 1 / scale, 1.0])
    c = c / np.linalg.norm(c)

    exact = None
    if abs(zp) > PLANE_EPS * float(np.linalg.norm(frame.P)):
        ex = np.array([zp * zp / (a + b), -2 * zp * xp / (a + b), xp * xp / (a + b) + yp * yp / b - 1.0,
                       0.0, 2 * zp, -zp * zp])
        ex = ex / np.linalg.norm(ex)
        exact = ex if ex @ c >= 0 else -ex
    kind = _conic_kind(c)

    notes: dict[str, Any] = {
        "A": np.array([sa, 0.0]),
        "B": np.array([-sa, 0.0]),
    }
    for name, y in (("C_bar", sb), ("D_bar", -sb)):
        notes[name] = None if abs(y - yp) <= 1e-9 * sb else _project((xp, yp, zp), 0.0, y)
    if notes["C_bar"] is not None and notes["D_bar"] is not None:
        centre = 0.5 * (notes["C_bar"] + notes["D_bar"])
        A_, B_, C_, D_, E_, F_ = c
        zc = centre[1]
        qa, qb, qc = A_, B_ * zc + D_, C_ * zc * zc + E_ * zc + F_
        disc = qb * qb - 4 * qa * qc
        if qa != 0 and disc >= 0:
            r = math.sqrt(disc)
            notes["E_bar"] = np.array([(-qb + r) / (2 * qa), zc])
            notes["F_bar"] = np.array([(-qb - r) / (2 * qa), zc])
    return ProjectedConic(c, exact, kind, fit_res, S, notes)


# --------------------------------------------------------------------------
# the quartic


def _quartic_from_gamma(alpha, a, b, xp, yp, gamma):
    """Coefficients (descending) of (alpha y^2 - 2ab y' y - gamma)^2 - 4 y'^2 b x'^2 (a+b)(b - y^2) y^2."""
    k = 4 * yp * yp * b * xp * xp * (a + b)
    c4 = alpha * alpha + k
    c3 = -4 * alpha * a * b * yp
    c2 = 4 * a * a * b * b * yp * yp - 2 * alpha * gamma - k * b
    c1 = 4 * a * b * yp * gamma
    c0 = gamma * gamma
    return (c4, c3, c2, c1, c0)


def _proportional(p, q, tol=1e-12) -> bool:
    p = [float(x) for x in p]
    q = [float(x) for x in q]
    num = np.linalg.norm(np.outer(p, q) - np.outer(q, p))
    return bool(num <= tol * np.linalg.norm(p) * np.linalg.norm(q))


@dataclass
class QuarticInstance:
    a: Any
    b: Any
    x: Any
    y: Any
    z_sq: Any
    alpha: Any
    beta_coeffs: tuple        # beta = beta_coeffs[0] + beta_coeffs[1] * x
    gamma: Any
    gamma_printed: Any
    quartic: tuple            # descending, from the direct elimination
    quartic_printed: tuple    # descending, same algebra with gamma = b y'^2
    printed_matches_elimination: bool
    elimination_check: float  # max relative mismatch at sample y against the eliminated form
    alpha_check: float        # |alpha - alpha recovered from the projection equation|

    def poly(self) -> RealPoly:
        return RealPoly.from_descending([float(c) for c in self.quartic])

    def eq17(self, x, y) -> float:
        beta = self.beta_coeffs[0] + self.beta_coeffs[1] * x
        return float(self.alpha * y * y - beta * y - self.gamma)

    def to_dict(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, Fraction) else float(v)
        return {
            "a": num(self.a), "b": num(self.b), "x": num(self.x), "y": num(self.y), "z_sq": num(self.z_sq),
            "alpha": num(self.alpha), "beta_coeffs": [num(v) for v in self.beta_coeffs],
            "gamma": num(self.gamma), "gamma_printed": num(self.gamma_printed),
            "quartic": [num(v) for v in self.quartic],
            "quartic_printed": [num(v) for v in self.quartic_printed],
            "printed_matches_elimination": self.printed_matches_elimination,
            "elimination_check": self.elimination_check,
            "alpha_check": self.alpha_check,
        }


def projection_residual(a, b, xp, yp, zsq, x, y) -> float:
    """First projection condition with denominators cleared:
    b (y'x - x'y)^2 - a z'^2 y^2 - ab (y' - y)^2."""
    return b * (yp * x - xp * y) ** 2 - a * zsq * y * y - a * b * (yp - y) ** 2


def _eliminated(a, b, xp, yp, zsq, y) -> float:
    """Product of the projection condition over both ellipse points of ordinate y."""
    s2 = (a + b) * (b - y * y) / b
    # G(x) = L x^2 - M x + N, so G(s) G(-s) = (L s^2 + N)^2 - M^2 s^2
    L = b * yp * yp
    M = 2 * b * xp * yp * y
    N = b * xp * xp * y * y - a * zsq * y * y - a * b * (yp - y) ** 2
    return (L * s2 + N) ** 2 - M * M * s2


def quartic_instance(a, b, x, y, z=None, *, z_sq=None) -> QuarticInstance:
    """Assemble the quartic in y for the apex (x', y', z') in the focal-conic frame.

    Works with any numeric type; pass Fractions (and ``z_sq``) for exact
    coefficients.
    """
    if z_sq is None:
        if z is None:
            raise InputError("quartic_instance needs z or z_sq")
        z_sq = z * z
    if not (a > 0 and b > 0):
        raise InputError("a and b must be positive")
    if y == 0:
        raise DegenerateError("y' = 0: use special_case_y0", step="quartic_instance")
    alpha = a * b - b * x * x + (a + b) * y * y + a * z_sq
    beta = (2 * y * b * a, -2 * y * b * x)
    gamma = b * b * y * y
    gamma_p = y * y * b
    q = _quartic_from_gamma(alpha, a, b, x, y, gamma)
    qp = _quartic_from_gamma(alpha, a, b, x, y, gamma_p)

    fa, fb, fx, fy, fz = (float(v) for v in (a, b, x, y, z_sq))
    poly = RealPoly.from_descending([float(c) for c in q])
    worst = 0.0
    for yy in np.linspace(-1.7, 1.9, 10) * math.sqrt(fb):
        direct = _eliminated(fa, fb, fx, fy, fz, yy)
        mag = abs(direct) + abs(poly(yy)) + 1e-300
        ref = sum(abs(float(c)) * abs(yy) ** (4 - i) for i, c in enumerate(q))
        worst = max(worst, abs(direct - poly(yy)) / max(ref, mag))
    # alpha recovered as minus the y^2 coefficient of the projection condition
    # after substituting x^2 from the ellipse, read off at x = 0
    def h(yy):
        return projection_residual(fa, fb, fx, fy, fz, 0.0, yy) + fy * fy * (fa + fb) * (fb - yy * yy)

    a_rec = -(h(1.0) + h(-1.0) - 2 * h(0.0)) / 2
    alpha_chk = abs(a_rec - float(alpha)) / max(abs(fa * fb) + fb * fx * fx + (fa + fb) * fy * fy + fa * abs(fz), 1e-300)

    return QuarticInstance(a, b, x, y, z_sq, alpha, beta, gamma, gamma_p, q, qp,
                           _proportional(q, qp), worst, alpha_chk)


def special_case_x0(a, b, y, z=None, *, z_sq=None) -> dict:
    """Closed-form roots of ``alpha y^2 - beta y - gamma = 0`` when x' = 0.

    Then beta = 2 a b y' no longer depends on x and beta^2 = 4 gamma a^2, so
    ``y = (y' a b +- sqrt(gamma (a^2 + alpha))) / alpha``.
    """
    if z_sq is None:
        z_sq = 0 if z is None else z * z
    fa, fb, fy, fz = float(a), float(b), float(y), float(z_sq)
    alpha = fa * fb + (fa + fb) * fy * fy + fa * fz
    gamma = fb * fb * fy * fy
    beta = 2 * fa * fb * fy
    if alpha == 0:
        raise DegenerateError("alpha = 0 with x' = 0", step="special_case_x0")
    r = math.sqrt(gamma * (fa * fa + alpha))
    roots = sorted([(fy * fa * fb + r) / alpha, (fy * fa * fb - r) / alpha])
    res = [abs(alpha * t * t - beta * t - gamma) / (abs(alpha) * t * t + abs(beta * t) + gamma) for t in roots]
    rejected = [t for t in roots if abs(t - fy) <= 1e-12 * max(1.0, abs(fy))]
    return {
        "alpha": alpha, "beta": beta, "gamma": gamma,
        "roots": roots,
        "residuals": res,
        "rejected_y_eq_yprime": rejected,
        "accepted": [t for t in roots if t not in rejected],
        "geometry": "OP is a profile line: orthogonal to the major semi-axis of the OQR section",
    }


def special_case_y0(a, b, *, x=None, z=None, x_sq=None, z_sq=None) -> dict:
    """Apex in the plane of the focal hyperbola (y' = 0).

    The quadratic collapses to ``alpha y^2 = 0`` with
    ``alpha = ab - b x'^2 + a z'^2``; alpha = 0 exactly when the apex is on the
    focal hyperbola. In either case the common edges are the lines from the
    apex to the foci (+-sqrt(a+b), 0, 0) of the hyperbola, and the axes are the
    y-axis plus the two bisectors of those lines (tangent and normal of the
    hyperbola at the apex when it lies on it).
    """
    if x_sq is None:
        if x is None:
            raise InputError("special_case_y0 needs x or x_sq")
        x_sq = x * x
    if z_sq is None:
        if z is None:
            raise InputError("special_case_y0 needs z or z_sq")
        z_sq = z * z
    alpha = a * b - b * x_sq + a * z_sq
    if isinstance(alpha, Fraction) or isinstance(alpha, int):
        on = alpha == 0
    else:
        on = abs(alpha) <= 1e-12 * (abs(a * b) + abs(b * x_sq) + abs(a * z_sq))
    xv = float(x) if x is not None else math.sqrt(float(x_sq))
    zv = float(z) if z is not None else math.sqrt(float(z_sq))
    f = math.sqrt(float(a) + float(b))
    apex = np.array([xv, 0.0, zv])
    edges = [unit(np.array([s * f, 0.0, 0.0]) - apex) for s in (1.0, -1.0)]
    bis = unit(edges[0] + edges[1]) if np.linalg.norm(edges[0] + edges[1]) > 1e-12 else unit(np.cross(edges[0], [0, 1.0, 0]))
    other = np.cross([0.0, 1.0, 0.0], bis)
    out = {
        "alpha": alpha,
        "on_focal_hyperbola": bool(on),
        "branch": "on focal hyperbola" if on else "immediate solution off the hyperbola",
        "foci": [[f, 0.0, 0.0], [-f, 0.0, 0.0]],
        "edges": [e.tolist() for e in edges],
        "axes": [[0.0, 1.0, 0.0], bis.tolist(), unit(other).tolist()],
    }
    if on:
        # tangent of x^2/a - z^2/b = 1 at the apex is orthogonal to (x/a, -z/b)
        nrm = unit(np.array([xv / float(a), 0.0, -zv / float(b)]))
        out["hyperbola_normal"] = nrm.tolist()
        out["hyperbola_tangent"] = unit(np.cross([0.0, 1.0, 0.0], nrm)).tolist()
    return out


# --------------------------------------------------------------------------
# step 3: common edges, diagonal triangle, lengths


@dataclass
class EdgeSet:
    directions: np.ndarray          # rows, unit, world frame
    classification: str             # "4 real" | "2 real" | "degenerate"
    points: np.ndarray              # frame coords of the focal-ellipse points hit
    eq16_residuals: np.ndarray      # rows: (projection condition, ellipse)
    cone_residuals: np.ndarray      # rows: (ellipse cone, hyperbola cone)
    quartic: QuarticInstance | None = None
    roots: list[float] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "directions": self.directions.tolist(),
            "classification": self.classification,
            "points": self.points.tolist(),
            "eq16_residuals": self.eq16_residuals.tolist(),
            "cone_residuals": self.cone_residuals.tolist(),
            "quartic": None if self.quartic is None else self.quartic.to_dict(),
            "roots": list(self.roots),
            "notes": list(self.notes),
        }


def _eq16_residuals(a, b, apex, x, y) -> tuple[float, float]:
    xp, yp, zp = apex
    g = projection_residual(a, b, xp, yp, zp * zp, x, y)
    g_scale = b * (abs(yp * x) + abs(xp * y)) ** 2 + a * zp * zp * y * y + a * b * (abs(yp) + abs(y)) ** 2
    e = x * x / (a + b) + y * y / b - 1.0
    return abs(g) / g_scale, abs(e)


def _newton_point(a, b, apex, x, y, steps=4):
    """Polish a common point on both conditions (2D Newton)."""
    xp, yp, zp = apex
    zs = zp * zp
    for _ in range(steps):
        F1 = x * x / (a + b) + y * y / b - 1.0
        u = yp * x - xp * y
        F2 = b * u * u - a * zs * y * y - a * b * (yp - y) ** 2
        J = np.array([
            [2 * x / (a + b), 2 * y / b],
            [2 * b * u * yp, -2 * b * u * xp - 2 * a * zs * y + 2 * a * b * (yp - y)],
        ])
        try:
            dx, dy = np.linalg.solve(J, [F1, F2])
        except np.linalg.LinAlgError:
            break
        nx, ny = x - dx, y - dy
        r_old = sum(_eq16_residuals(a, b, apex, x, y))
        r_new = sum(_eq16_residuals(a, b, apex, nx, ny))
        if not (r_new <= r_old):
            break
        x, y = nx, ny
    return x, y


def common_edges(conics: DualFocalConics, frame: ChaslesFrame, tol: float | None = None) -> EdgeSet:
    """Common edges of the two focal cones at O via the quartic in y."""
    tol = pipeline_tol() if tol is None else tol
    a, b = conics.a, conics.b
    apex = frame.apex
    xp, yp, zp = apex
    qi = quartic_instance(a, b, xp, yp, z_sq=zp * zp)
    roots = real_roots(qi.poly(), tol=1e-6)
    ce = focal_cone(np.zeros(3), conics.ellipse)
    ch = focal_cone(np.zeros(3), conics.hyperbola)

    pts, dirs, eqr, cr, notes = [], [], [], [], []
    sb = math.sqrt(b)
    for r in roots:
        y = r.value
        if abs(y - yp) <= 1e-9 * max(1.0, abs(yp)):
            notes.append(f"root y = {y:.6g} equals y': ray parallel to the hyperbola plane, rejected")
            continue
        if abs(y) > sb * (1 + 1e-9):
            notes.append(f"root y = {y:.6g} outside the focal ellipse, rejected")
            continue
        s = math.sqrt(max((a + b) * (1 - y * y / b), 0.0))
        # the sign of x is fixed by the unsquared condition, before polishing
        x = min((s, -s), key=lambda xx: _eq16_residuals(a, b, apex, xx, y)[0])
        x, y2 = _newton_point(a, b, apex, x, y)
        res = sum(_eq16_residuals(a, b, apex, x, y2))
        if max(_eq16_residuals(a, b, apex, x, y2)) > tol:
            notes.append(f"root y = {y:.6g} extraneous (residual {res:.2e}), rejected")
            continue
        u = unit(frame.world((x, y2, 0.0)))
        if any(line_angle(u, d) <= 1e-7 for d in dirs):
            notes.append(f"root y = {y:.6g} duplicates an edge (tangency), merged")
            continue
        pts.append((x, y2, 0.0))
        dirs.append(u)
        eqr.append(_eq16_residuals(a, b, apex, x, y2))
        cr.append((ce.residual(u), ch.residual(u)))
    count = len(dirs)
    cls = "4 real" if count == 4 else ("2 real" if count == 2 else "degenerate")
    if count == 0:
        raise DegenerateError("no real edges: the focal conics' images do not meet", step="common_edges")
    return EdgeSet(np.array(dirs), cls, np.array(pts), np.array(eqr).reshape(-1, 2),
                   np.array(cr).reshape(-1, 2), qi, [r.value for r in roots], notes)


def axes_from_edges(edges: EdgeSet | np.ndarray) -> tuple[np.ndarray, float]:
    """Diagonal triangle of the complete quadrangle of four edge lines.

    Opposite pairs of edges span two planes through O; the line common to
    the two planes is a diagonal line. Returns the three lines (columns) and
    their worst pairwise |cos|.
    """
    U = edges.directions if isinstance(edges, EdgeSet) else np.asarray(edges)
    if U.shape[0] != 4:
        raise DegenerateError("diagonal triangle needs four distinct edges", step="axes_from_edges")
    pairs = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    lines = []
    for (i, j), (k, l) in pairs:
        n_a = np.cross(U[i], U[j])
        n_b = np.cross(U[k], U[l])
        d = np.cross(n_a, n_b)
        if np.linalg.norm(d) <= 1e-14 * np.linalg.norm(n_a) * np.linalg.norm(n_b):
            raise DegenerateError("coincident diagonal planes", step="axes_from_edges")
        lines.append(unit(d))
    D = np.column_stack(lines)
    G = np.abs(D.T @ D - np.eye(3))
    return D, float(G.max())


def axes_lengths(frame: ChaslesFrame, axis_dirs: np.ndarray, edge_dirs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Intercepts cut on each edge by the plane through P orthogonal to each axis.

    Returns ``(lengths, table)``: the mean intercept per axis and the full
    axes x edges table of measured intercepts.
    """
    P = frame.P
    table = np.empty((axis_dirs.shape[1], len(edge_dirs)))
    for i in range(axis_dirs.shape[1]):
        d = axis_dirs[:, i]
        for k, u in enumerate(edge_dirs):
            den = abs(float(u @ d))
            table[i, k] = abs(float(P @ d)) / den if den > 0 else math.inf
    return table.mean(axis=1), table


def _orthonormalize(D: np.ndarray) -> np.ndarray:
    U, _, Vt = np.linalg.svd(D)
    return U @ Vt


@dataclass
class ChaslesTrace:
    frame: ChaslesFrame
    branch: str
    degenerate: bool
    conics: DualFocalConics | None = None
    projection: ProjectedConic | None = None
    edges: EdgeSet | None = None
    diagonal_orthogonality: float | None = None
    intercepts: np.ndarray | None = None
    intercept_spread: float | None = None
    cone_frame_angle: float | None = None
    cone_commutator: float | None = None
    tried_roles: list[dict] = field(default_factory=list)
    special: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def conv(v):
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            return v
        return {
            "frame": self.frame.to_dict(),
            "branch": self.branch,
            "degenerate": self.degenerate,
            "conics": None if self.conics is None else self.conics.to_dict(),
            "projection": None if self.projection is None else self.projection.to_dict(),
            "edges": None if self.edges is None else self.edges.to_dict(),
            "diagonal_orthogonality": self.diagonal_orthogonality,
            "intercepts": conv(self.intercepts),
            "intercept_spread": self.intercept_spread,
            "cone_frame_angle": self.cone_frame_angle,
            "cone_commutator": self.cone_commutator,
            "tried_roles": conv(self.tried_roles),
            "special": conv(self.special),
            "notes": list(self.notes),
        }


def _choose_frame(sys: ConjugateSystem) -> tuple[ChaslesFrame, list[dict]]:
    tried = []
    frames = []
    for role in (0, 1, 2):
        try:
            fr = build_frame(sys, role)
        except DegenerateError as exc:
            tried.append({"role": role, "error": str(exc)})
            continue
        c = fr.conditioning()
        tried.append({"role": role, "conditioning": c})
        frames.append((c, fr))
        if role == 0 and c >= RETRY_BELOW:
            return fr, tried
    if not frames:
        raise DegenerateError("no diameter yields a usable frame", step="build_frame")
    frames.sort(key=lambda cf: -cf[0])
    return frames[0][1], tried


def _special_branch(frame: ChaslesFrame, trace: ChaslesTrace) -> tuple[np.ndarray, np.ndarray]:
    """Apex in a focal-conic plane: edges through the foci, one axis known directly."""
    xp, yp, zp = frame.apex
    nP = float(np.linalg.norm(frame.P))
    y_zero = abs(yp) <= PLANE_EPS * nP
    z_zero = abs(zp) <= PLANE_EPS * nP
    B = frame.basis
    if y_zero and z_zero:
        trace.branch = "principal"
        trace.notes.append("OP is normal to the plane OQR: the frame is principal")
        D = B.copy()
        L = np.array([abs(float(frame.P @ frame.n1)), frame.rho2, frame.rho3])
        return D, L

    r2, r3 = frame.rho2 ** 2, frame.rho3 ** 2
    if y_zero:
        # O in the hyperbola plane: edges to the hyperbola foci (+-rho3, 0, 0)
        trace.branch = "y0"
        trace.special = special_case_y0(r2, r3 - r2, x=xp, z=zp) if r3 > r2 else None
        known, known_len, plane = frame.n2, frame.rho2, (0, 2)
        foci = [np.array([s * frame.rho3, 0.0, 0.0]) for s in (1.0, -1.0)]
    else:
        # O in the ellipse plane: edges to the hyperbola vertices (+-rho2, 0, 0)
        trace.branch = "z0"
        known, known_len, plane = frame.n3, frame.rho3, (0, 1)
        foci = [np.array([s * frame.rho2, 0.0, 0.0]) for s in (1.0, -1.0)]
    edges = np.array([unit(frame.world(f)) for f in foci])
    s, d = edges[0] + edges[1], edges[0] - edges[1]
    b1 = unit(s if np.linalg.norm(s) >= np.linalg.norm(d) else np.cross(known, d))
    b2 = unit(np.cross(known, b1))
    D = np.column_stack([known, b1, b2])
    lens, table = axes_lengths(frame, D[:, 1:], edges)
    trace.intercepts = table
    trace.intercept_spread = float(np.max(np.ptp(table, axis=1) / lens))
    trace.edges = EdgeSet(edges, "2 real", np.array([frame.coords(frame.world(f)) for f in foci]),
                          np.zeros((2, 2)), np.zeros((2, 2)),
                          notes=["edges join O with the foci of the focal conic whose plane contains O"])
    return D, np.array([known_len, lens[0], lens[1]])


def chasles_axes(sys: ConjugateSystem, tol: float | None = None) -> tuple[AxesResult, ChaslesTrace]:
    """Axes of the ellipsoid carrying ``sys`` by Chasles's construction."""
    tol = pipeline_tol() if tol is None else tol
    frame, tried = _choose_frame(sys)
    trace = ChaslesTrace(frame, "generic", False, tried_roles=tried)
    if frame.role != 0:
        trace.notes.append(f"diameter {frame.role} used as P (better conditioned frame)")

    xp, yp, zp = frame.apex
    nP = float(np.linalg.norm(frame.P))
    if abs(yp) <= PLANE_EPS * nP or abs(zp) <= PLANE_EPS * nP:
        trace.degenerate = True
        D, L = _special_branch(frame, trace)
        return AxesResult(_orthonormalize(D), tuple(L), "chasles"), trace

    try:
        conics = dual_focal_conics(frame)
    except DegenerateError as exc:
        exc.step = exc.step or "dual_focal_conics"
        raise
    trace.conics = conics
    try:
        trace.projection = project_focal_ellipse(conics, frame)
    except DegenerateError as exc:
        trace.notes.append(f"projection fit skipped: {exc}")

    edges = common_edges(conics, frame, tol)
    trace.edges = edges
    ce = focal_cone(np.zeros(3), conics.ellipse)
    ch = focal_cone(np.zeros(3), conics.hyperbola)
    V, comm = shared_frame(ce.K, ch.K)
    trace.cone_commutator = comm

    if edges.directions.shape[0] == 4:
        D, orth = axes_from_edges(edges)
        trace.diagonal_orthogonality = orth
        if orth > tol:
            trace.notes.append(f"diagonal lines orthogonal only to {orth:.2e}")
        trace.cone_frame_angle = max(min(line_angle(D[:, i], V[:, j]) for j in range(3)) for i in range(3))
    else:
        trace.degenerate = True
        trace.branch = "cone-frame fallback"
        trace.notes.append(f"{edges.classification} edges: axes taken from the shared frame of the cones")
        D = V
        E = common_edges_in_frame(V, ce.K, ch.K)
        if E.shape[0] == 4:
            edges.directions = E
    D = _orthonormalize(D)
    lens, table = axes_lengths(frame, D, edges.directions)
    trace.intercepts = table
    trace.intercept_spread = float(np.max(np.ptp(table, axis=1) / lens))
    if trace.intercept_spread > 1e-6:
        trace.notes.append(f"intercepts on the four edges disagree by {trace.intercept_spread:.2e}")
    return AxesResult(D, tuple(lens), "chasles"), trace


def compare_with_oracle(sys: ConjugateSystem, tol: float | None = None) -> dict:
    res, trace = chasles_axes(sys, tol)
    ora = axes_oracle(sys)
    return {"chasles": res, "oracle": ora, "trace": trace, "metrics": res.compare(ora)}
