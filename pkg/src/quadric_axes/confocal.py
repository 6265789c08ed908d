"""Confocal quadrics through a point, their semi-axis tables and focal cones.

Everything here works in the canonical frame of the base ellipsoid; world
coordinates are converted through ``Ellipsoid.frame`` at the boundary.

The quadrics confocal to ``sum x_i^2 / a_i^2 = 1`` are
``sum x_i^2 / (a_i^2 - lam) = 1``. Through a point with nonzero coordinates
pass exactly n of them, with parameters interlacing the squared semi-axes.
Squared semi-axes ``a_i^2 - lam_j`` are kept *signed*: a negative entry marks
a hyperbolic axis, and the product formulas below depend on those signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conjugate import Ellipsoid
from .errors import DegenerateError, InputError
from .numkernel import sym_eigen, unit

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ConfocalTriple:
    """The n confocals through ``point``.

    ``table[i, j]`` is the signed squared semi-axis along coordinate axis i of
    the j-th confocal, ``a_i^2 - lambdas[j]``; ``lambdas`` is increasing.
    """

    base: Ellipsoid
    point: np.ndarray
    lambdas: np.ndarray
    table: np.ndarray

    @property
    def n(self) -> int:
        return self.base.n

    def interlacing_ok(self) -> bool:
        s = np.sort(self.base.squares)
        lam = self.lambdas
        ok = lam[0] < s[0]
        for k in range(1, self.n):
            ok = ok and s[k - 1] < lam[k] < s[k]
        major = self.table[0]
        return bool(ok and np.all(np.diff(major) < 0))

    def normal(self, j: int) -> np.ndarray:
        """Unit normal (canonical frame) of the j-th confocal at the point."""
        return unit(self.point / self.table[:, j])


def _f(lam: float, x2: np.ndarray, s: np.ndarray) -> float:
    d = s - lam
    total = -float(np.prod(d))
    for i in range(len(s)):
        total += x2[i] * float(np.prod(np.delete(d, i)))
    return total


def _lower_bracket(s: np.ndarray, x2: np.ndarray, fun) -> float:
    """Lower end of a bracket for the smallest root."""
    width = max(1.0, s[0], float(x2.sum()))
    while fun(s[0] - width) >= 0.0:
        width *= 2.0
    return s[0] - width


def _bisect(fun, lo: float, hi: float, flo: float, max_iter: int = 200) -> float:
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = fun(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lambda_roots(ell: Ellipsoid, p, *, world: bool = False) -> ConfocalTriple:
    """Parameters of the n confocals through ``p`` by bracketed bisection.

    The brackets come from the sign pattern of
    ``f(lam) = sum x_i^2 prod_{j!=i}(a_j^2 - lam) - prod(a_i^2 - lam)``:
    ``f(-inf) < 0``, then alternating signs at the squared semi-axes.
    """
    if not ell.strict:
        raise InputError("non-strict ellipsoid")
    x = np.asarray(p, dtype=float).reshape(-1)
    if x.shape[0] != ell.n:
        raise InputError("point dimension does not match the ellipsoid")
    if world:
        x = ell.to_canonical(x)
    if np.any(x == 0.0):
        raise InputError("point on coordinate hyperplane")
    a2 = ell.squares
    x2 = x * x
    s = np.sort(a2)
    fun = lambda lam: _f(lam, x2, a2)

    lams = []
    # lowest root: the bracket is extended downward until f changes sign
    floor = _lower_bracket(s, x2, fun)
    lams.append(_bisect(fun, floor, s[0], fun(floor)))
    for k in range(1, ell.n):
        lo, hi = s[k - 1], s[k]
        lams.append(_bisect(fun, lo, hi, fun(lo)))

    # re-solve each root in t = a_m^2 - lam about the nearest squared semi-axis,
    # so the small entry of the table is found directly rather than by cancellation
    table = np.empty((ell.n, ell.n))
    lam = np.empty(ell.n)
    for j, crude in enumerate(lams):
        cands = [k for k in (j - 1, j) if 0 <= k < ell.n]
        k = min(cands, key=lambda c: abs(s[c] - crude))
        m = int(np.flatnonzero(a2 == s[k])[0])
        base = a2 - a2[m]
        if k == j:      # anchored at the upper end of the bracket: t in (0, s_j - s_{j-1})
            t_lo, t_hi = 0.0, (s[j] - s[j - 1]) if j > 0 else s[0] - floor
        else:           # anchored at the lower end: t in (s_{j-1} - s_j, 0)
            t_lo, t_hi = s[j - 1] - s[j], 0.0
        # a_i^2 - lam = base_i + t, exact zero offset on the anchor row
        g = lambda t: _f(-t, x2, base)
        t = _bisect(g, t_lo, t_hi, g(t_lo))
        col = base + t
        col[m] = t
        table[:, j] = col
        lam[j] = a2[m] - t
    return ConfocalTriple(ell, x, lam, table)


def f_residual(t: ConfocalTriple) -> np.ndarray:
    """|f(lam_j)| relative to the magnitude of its terms, from the table columns."""
    x2 = t.point ** 2
    out = []
    for j in range(t.n):
        d = t.table[:, j]
        val = _f(0.0, x2, d)
        scale = float(np.prod(np.abs(d))) + sum(
            x2[i] * float(np.prod(np.abs(np.delete(d, i)))) for i in range(len(d)))
        out.append(abs(val) / scale)
    return np.array(out)


def recover_coordinates(t: ConfocalTriple) -> tuple[np.ndarray, np.ndarray]:
    """Squared coordinates (and their roots) from the signed semi-axis table.

    ``x_i^2 = prod_j (a_i^j)^2 / prod_{j != i} ((a_i^i)^2 - (a_j^i)^2)``; the
    denominator reduces to ``a_i^2 - a_j^2``.
    """
    a2 = t.base.squares
    n = t.n
    x2 = np.empty(n)
    for i in range(n):
        den = float(np.prod([a2[i] - a2[j] for j in range(n) if j != i]))
        if den == 0.0:
            raise DegenerateError("degenerate confocal configuration", step="confocal")
        x2[i] = float(np.prod(t.table[i])) / den
    return x2, np.sqrt(np.abs(x2))


def norm_square_identity(t: ConfocalTriple) -> tuple[float, float]:
    """(|p|^2, sum_j (a_j^j)^2) which must agree."""
    lhs = float(np.sum(t.point ** 2))
    rhs = float(np.trace(t.table))
    return lhs, rhs


def orthogonality_residual(t: ConfocalTriple, j: int, k: int) -> float:
    """sum_i p_i^2 / ((a_i^j)^2 (a_i^k)^2) relative to the sum of its absolute terms.

    The sum vanishes for j != k: it is the inner product of the two normals
    up to positive factors, once the common factor (a_1^k)^2 - (a_1^j)^2 is
    divided out.
    """
    if j == k:
        raise InputError("orthogonality residual needs two distinct confocals")
    T = t.table
    terms = t.point ** 2 / (T[:, j] * T[:, k])
    return float(np.sum(terms) / np.sum(np.abs(terms)))


def pole(h, ell: Ellipsoid) -> np.ndarray:
    """Pole of the hyperplane <h, x> = 1 (canonical frame): xi_i = h_i a_i^2."""
    h = np.asarray(h, dtype=float)
    if not np.any(h):
        raise InputError("hyperplane normal must be nonzero")
    return h * ell.squares


def support_distances(t: ConfocalTriple) -> np.ndarray:
    """Signed (p^j)^2: squared distance from the centre to the j-th tangent plane.

    ``(p^j)^2 = prod_i (a_i^j)^2 / prod_{k != j} ((a_1^j)^2 - (a_1^k)^2)``.
    """
    T = t.table
    n = t.n
    out = np.empty(n)
    for j in range(n):
        den = float(np.prod([T[0, j] - T[0, k] for k in range(n) if k != j]))
        out[j] = float(np.prod(T[:, j])) / den
    return out


def support_distances_from_normals(t: ConfocalTriple) -> np.ndarray:
    """Same quantity from the normal vector: 1 / sum_i p_i^2 / (a_i^j)^4."""
    return 1.0 / np.sum(t.point[:, None] ** 2 / t.table ** 2, axis=0)


@dataclass
class DualSystem:
    """Confocal system centred at the point, principal planes = its tangent planes.

    ``normals`` are the unit normals (columns, canonical frame) of the n
    confocals at the point; dual confocal i has signed squared semi-axis
    ``table[i, j]`` along ``normals[:, j]``.
    """

    centre: np.ndarray
    normals: np.ndarray
    table: np.ndarray
    origin_coords: np.ndarray
    origin_residuals: np.ndarray
    tangent_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {
            "centre": self.centre.tolist(),
            "normals": self.normals.T.tolist(),
            "squared_axes": self.table.tolist(),
            "origin_coords": self.origin_coords.tolist(),
            "origin_residuals": self.origin_residuals.tolist(),
            "tangent_residuals": self.tangent_residuals.tolist(),
        }


def dual_system(t: ConfocalTriple) -> DualSystem:
    """Dual confocal system at the point, with the two duality checks.

    * the original centre lies on every dual confocal;
    * the tangent plane of dual confocal i at the original centre is the
      i-th principal plane (its normal is the i-th coordinate axis).
    """
    n = t.n
    N = np.column_stack([t.normal(j) for j in range(n)])
    xi = N.T @ (-t.point)  # coordinates of the original centre in the dual frame
    T = t.table
    origin_res = np.array([float(np.sum(xi ** 2 / T[i])) - 1.0 for i in range(n)])
    tang = []
    for i in range(n):
        g = N @ (xi / T[i])
        g = unit(g)
        tang.append(1.0 - abs(g[i]))
    return DualSystem(t.point, N, T, xi, origin_res, np.array(tang))


@dataclass(frozen=True)
class SignedConic:
    """Central quadric of dimension m inside an affine m-plane of n-space.

    ``frame`` holds an orthonormal basis of the plane (columns), ``signed_sq``
    the signed squared semi-axes along those columns. For m = 2 this is a
    conic: ellipse (both positive), hyperbola (mixed) or imaginary.
    """

    origin: np.ndarray
    frame: np.ndarray
    signed_sq: tuple[float, ...]
    label: str = ""

    @property
    def imaginary(self) -> bool:
        return all(s < 0 for s in self.signed_sq)

    @property
    def kind(self) -> str:
        if self.imaginary:
            return "imaginary"
        return "ellipse" if all(s > 0 for s in self.signed_sq) else "hyperbola"

    @property
    def plane_normal(self) -> np.ndarray:
        if self.frame.shape != (3, 2):
            raise InputError("plane normal is defined for conics in 3-space")
        return unit(np.cross(self.frame[:, 0], self.frame[:, 1]))

    def local(self, x) -> np.ndarray:
        return self.frame.T @ (np.asarray(x, dtype=float) - self.origin)

    def residual(self, x) -> float:
        xi = self.local(x)
        return float(np.sum(xi ** 2 / np.asarray(self.signed_sq))) - 1.0

    def points(self, ts) -> np.ndarray:
        """Sample points (rows). Hyperbolas use both branches, cosh/sinh."""
        s1, s2 = self.signed_sq
        ts = np.asarray(ts, dtype=float)
        if self.kind == "ellipse":
            loc = np.column_stack([math.sqrt(s1) * np.cos(ts), math.sqrt(s2) * np.sin(ts)])
        elif self.kind == "hyperbola":
            if s1 > 0:
                sgn = np.where(np.arange(len(ts)) % 2 == 0, 1.0, -1.0)
                loc = np.column_stack([sgn * math.sqrt(s1) * np.cosh(ts), math.sqrt(-s2) * np.sinh(ts)])
            else:
                sgn = np.where(np.arange(len(ts)) % 2 == 0, 1.0, -1.0)
                loc = np.column_stack([math.sqrt(-s1) * np.sinh(ts), sgn * math.sqrt(s2) * np.cosh(ts)])
        else:
            raise DegenerateError("imaginary conic has no real points", step="conic")
        return self.origin[None, :] + loc @ self.frame.T

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "origin": self.origin.tolist(),
            "frame": self.frame.T.tolist(),
            "signed_sq": list(self.signed_sq),
        }


def focal_quadric(ell: Ellipsoid, k: int) -> SignedConic:
    """k-th focal quadric (1-based): ``sum_{i != k} x_i^2 / (a_i^2 - a_k^2) = 1, x_k = 0``.

    Returned in world coordinates. For k = 1 all squares are negative and the
    result is flagged imaginary rather than raising.
    """
    if not ell.strict:
        raise InputError("non-strict ellipsoid")
    n = ell.n
    if not 1 <= k <= n:
        raise InputError(f"focal quadric index must be in 1..{n}")
    a2 = ell.squares
    idx = [i for i in range(n) if i != k - 1]
    frame = ell.frame[:, idx]
    sq = tuple(float(a2[i] - a2[k - 1]) for i in idx)
    name = f"focal quadric {k}"
    if n == 3 and k in (2, 3):
        name = "focal hyperbola" if k == 2 else "focal ellipse"
    return SignedConic(np.zeros(n), frame, sq, label=name)


def central_section_radii(ell: Ellipsoid, x, *, world: bool = False, tol: float = 1e-9) -> np.ndarray:
    """Squared semi-axes (rho_j)^2 = (a_1^1)^2 - (a_1^j)^2, j >= 2, of the central
    section parallel to the tangent plane at a surface point ``x``."""
    t = lambda_roots(ell, x, world=world)
    if abs(t.lambdas[0]) > tol * ell.squares.max():
        raise InputError("point is not on the ellipsoid")
    T = t.table
    return np.array([T[0, 0] - T[0, j] for j in range(1, t.n)])


def section_radii_oracle(ell: Ellipsoid, x, *, world: bool = False) -> np.ndarray:
    """Squared semi-axes of the central section parallel to the tangent plane at x,
    by restricting the quadric to the plane (ascending order)."""
    x = np.asarray(x, dtype=float)
    if world:
        x = ell.to_canonical(x)
    n = unit(x / ell.squares)
    # orthonormal basis of the plane orthogonal to n
    _, _, vt = np.linalg.svd(n[None, :])
    B = vt[1:].T
    Mr = B.T @ np.diag(1.0 / ell.squares) @ B
    vals = np.linalg.eigvalsh(0.5 * (Mr + Mr.T))
    return np.sort(1.0 / vals)


@dataclass(frozen=True)
class ConeQuadric:
    """Quadratic cone {apex + u : u^T K u = 0}."""

    apex: np.ndarray
    K: np.ndarray

    def normalized(self) -> np.ndarray:
        return self.K / np.linalg.norm(self.K)

    def residual(self, u) -> float:
        u = unit(u)
        return float(u @ self.normalized() @ u)


def focal_cone(apex, conic: SignedConic) -> ConeQuadric:
    """Cone with the given apex whose generators pass through ``conic``.

    In the conic's local frame (f1, f2, m) with w = apex - origin, the ray
    apex + t u meets the plane at t = -w_m / u_m; substituting into the conic
    and clearing u_m^2 gives the quadratic form
    ``(w1 u_m - w_m u1)^2 / s1 + (w2 u_m - w_m u2)^2 / s2 - u_m^2``.
    """
    apex = np.asarray(apex, dtype=float)
    f1, f2 = conic.frame[:, 0], conic.frame[:, 1]
    m = np.cross(f1, f2)
    F = np.column_stack([f1, f2, m])
    w = F.T @ (apex - conic.origin)
    scale = max(1.0, float(np.linalg.norm(apex)), float(np.sqrt(np.max(np.abs(conic.signed_sq)))))
    if abs(w[2]) <= 1e-12 * scale:
        raise DegenerateError("degenerate cone: apex lies in the conic's plane", step="focal_cone")
    s1, s2 = conic.signed_sq
    l1 = np.array([-w[2], 0.0, w[0]])
    l2 = np.array([0.0, -w[2], w[1]])
    l3 = np.array([0.0, 0.0, 1.0])
    Kl = np.outer(l1, l1) / s1 + np.outer(l2, l2) / s2 - np.outer(l3, l3)
    K = F @ Kl @ F.T
    return ConeQuadric(apex, 0.5 * (K + K.T))


def shared_frame(K1: np.ndarray, K2: np.ndarray) -> tuple[np.ndarray, float]:
    """Common eigenframe of two commuting symmetric forms.

    Both forms are scaled to unit Frobenius norm ("whitened") first. Returns
    the frame (columns) and the commutator residual ||K1 K2 - K2 K1||.
    """
    A = K1 / np.linalg.norm(K1)
    B = K2 / np.linalg.norm(K2)
    comm = float(np.linalg.norm(A @ B - B @ A))
    _, V = sym_eigen(A + GOLDEN * B)
    return V, comm


def common_edges_in_frame(V: np.ndarray, K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
    """The (up to) four common real edges of two cones diagonal in frame V.

    With u = V c both forms read sum k_i c_i^2 = 0; the squares c_i^2 solve a
    2x3 linear system whose kernel is the cross product of the diagonals.
    Returns unit edge directions as rows (empty if the edges are imaginary).
    """
    d1 = np.diag(V.T @ (K1 / np.linalg.norm(K1)) @ V)
    d2 = np.diag(V.T @ (K2 / np.linalg.norm(K2)) @ V)
    w = np.cross(d1, d2)
    if np.all(w <= 0):
        w = -w
    if np.any(w < 0):
        return np.zeros((0, 3))
    c = np.sqrt(w / w.sum())
    signs = [(1, 1, 1), (-1, 1, 1), (1, -1, 1), (-1, -1, 1)]
    return np.array([V @ (c * np.array(s)) for s in signs])


@dataclass
class ConeAxesReport:
    apex: np.ndarray
    commutator: float
    frame: np.ndarray
    edges: np.ndarray
    edge_residuals: np.ndarray
    frame_vs_normals: np.ndarray | None = None
    signature_residual: float | None = None

    def to_dict(self) -> dict:
        d = {
            "apex": self.apex.tolist(),
            "commutator": self.commutator,
            "frame": self.frame.T.tolist(),
            "edges": self.edges.tolist(),
            "edge_residuals": self.edge_residuals.tolist(),
        }
        if self.frame_vs_normals is not None:
            d["frame_vs_normals"] = self.frame_vs_normals.tolist()
            d["signature_residual"] = self.signature_residual
        return d


def cone_axes_check(apex, ell: Ellipsoid, *, world: bool = False) -> ConeAxesReport:
    """Build both real focal cones at ``apex`` (n = 3) and extract their axes.

    When the apex has nonzero coordinates the shared frame is also compared
    with the normals of the three confocals through it, and the cone forms
    with the diagonal forms whose signed squared semi-axes are ``a_k^2 - lam_i``.
    """
    if ell.n != 3:
        raise InputError("focal cones are implemented for n = 3")
    x = np.asarray(apex, dtype=float)
    xw = x if world else ell.from_canonical(x)
    if np.allclose(xw, 0.0):
        raise DegenerateError("degenerate cone: apex at the centre", step="cone_axes")
    ce = focal_cone(xw, focal_quadric(ell, 3))
    ch = focal_cone(xw, focal_quadric(ell, 2))
    V, comm = shared_frame(ce.K, ch.K)
    edges = common_edges_in_frame(V, ce.K, ch.K)
    res = np.array([[ce.residual(u), ch.residual(u)] for u in edges]).reshape(-1, 2)
    rep = ConeAxesReport(xw, comm, V, edges, res)

    xc = ell.to_canonical(xw)
    if np.all(xc != 0.0):
        t = lambda_roots(ell, xc)
        N = ell.frame @ np.column_stack([t.normal(j) for j in range(3)])
        rep.frame_vs_normals = np.array([max(abs(V[:, c] @ N[:, j]) for c in range(3)) for j in range(3)])
        sig = 0.0
        for k, cone in ((3, ce), (2, ch)):
            D = N @ np.diag(1.0 / t.table[k - 1]) @ N.T
            D /= np.linalg.norm(D)
            Kn = cone.normalized()
            sig = max(sig, min(np.linalg.norm(Kn - D), np.linalg.norm(Kn + D)))
        rep.signature_residual = float(sig)
    return rep


def intercept_check(ell: Ellipsoid, x, *, world: bool = False) -> dict:
    """Intercepts on the common focal-cone edges at ``x``.

    For each confocal j through x, the plane through the centre parallel to
    its tangent plane at x cuts every common edge at distance a_1^j from x.
    Returns measured lengths (rows: confocal j, columns: edge) and a_1^j.
    """
    xc = np.asarray(x, dtype=float)
    if world:
        xc = ell.to_canonical(xc)
    t = lambda_roots(ell, xc)
    rep = cone_axes_check(xc, ell)
    if rep.edges.shape[0] != 4:
        raise DegenerateError("no real common edges", step="intercepts")
    xw = ell.from_canonical(xc)
    lengths = np.empty((3, 4))
    for j in range(3):
        nj = ell.frame @ t.normal(j)
        for e, u in enumerate(rep.edges):
            lengths[j, e] = abs(float(nj @ xw)) / abs(float(nj @ u))
    expected = np.sqrt(t.table[0])
    return {"lengths": lengths, "expected": expected,
            "max_rel_err": float(np.max(np.abs(lengths - expected[:, None]) / expected[:, None]))}
