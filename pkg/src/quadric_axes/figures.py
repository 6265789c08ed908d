"""Flat SVG drawings of the Rytz and Chasles constructions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .chasles3d import ChaslesTrace  # noqa: E402
from .errors import InputError  # noqa: E402
from .rytz2d import RytzTrace  # noqa: E402

plt.rcParams["svg.fonttype"] = "none"   # keep labels as <text>
plt.rcParams["svg.hashsalt"] = "quadric-axes"

BAR = "̄"
PRIME = "′"


@dataclass
class FigureSpec:
    """Layers of a flat figure: polylines, infinite lines and labelled points."""

    title: str
    curves: list[tuple[np.ndarray, dict]] = field(default_factory=list)
    lines: list[tuple[np.ndarray, np.ndarray, dict]] = field(default_factory=list)   # point, direction
    points: dict[str, np.ndarray] = field(default_factory=dict)
    implicit: list[tuple[np.ndarray, dict]] = field(default_factory=list)           # conic coefficients
    viewport: tuple[float, float, float, float] | None = None

    def add_point(self, name: str, p) -> None:
        if p is None:
            return
        p = np.asarray(p, dtype=float)
        if np.all(np.isfinite(p)):
            self.points[name] = p

    def auto_viewport(self, margin: float = 0.15) -> tuple[float, float, float, float]:
        pts = [p for p in self.points.values()]
        for c, _ in self.curves:
            pts.extend(c[np.all(np.isfinite(c), axis=1)])
        if not pts:
            raise InputError("nothing to draw: empty trace")
        P = np.array(pts)
        lo, hi = P.min(axis=0), P.max(axis=0)
        span = max(float(np.max(hi - lo)), 1e-9)
        pad = margin * span
        return (lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad)


def _ellipse(a: float, b: float, frame=None, centre=(0.0, 0.0), n: int = 256) -> np.ndarray:
    t = np.linspace(0, 2 * math.pi, n)
    pts = np.column_stack([a * np.cos(t), b * np.sin(t)])
    if frame is not None:
        pts = pts @ np.asarray(frame).T
    return pts + np.asarray(centre)


def _hyperbola(a: float, b: float, reach: float, n: int = 128) -> list[np.ndarray]:
    tmax = math.acosh(max(reach / a, 1.0 + 1e-9))
    t = np.linspace(-tmax, tmax, n)
    return [np.column_stack([s * a * np.cosh(t), b * np.sinh(t)]) for s in (1.0, -1.0)]


def render(spec: FigureSpec, path: str) -> str:
    vp = spec.viewport or spec.auto_viewport()
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_aspect("equal")
    ax.set_xlim(vp[0], vp[1])
    ax.set_ylim(vp[2], vp[3])
    for c, style in spec.curves:
        ax.plot(c[:, 0], c[:, 1], **style)
    for p, d, style in spec.lines:
        ax.axline(tuple(p), tuple(np.asarray(p) + np.asarray(d)), **style)
    if spec.implicit:
        xs = np.linspace(vp[0], vp[1], 400)
        ys = np.linspace(vp[2], vp[3], 400)
        X, Y = np.meshgrid(xs, ys)
        for c, style in spec.implicit:
            A, B, C, D, E, F = c
            Z = A * X * X + B * X * Y + C * Y * Y + D * X + E * Y + F
            ax.contour(X, Y, Z, levels=[0.0], colors=style.get("color", "k"),
                       linestyles=style.get("linestyle", "solid"), linewidths=1.0)
    for name, p in spec.points.items():
        ax.plot([p[0]], [p[1]], "o", color="k", ms=3)
        ax.annotate(name, p, textcoords="offset points", xytext=(4, 4))
    ax.set_title(spec.title)
    ax.grid(True, lw=0.3, alpha=0.5)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def rytz_spec(tr: RytzTrace) -> FigureSpec:
    spec = FigureSpec("Rytz construction")
    a, b = tr.axis_lengths
    spec.curves.append((_ellipse(a, b, tr.axis_dirs), {"color": "k", "lw": 1.2}))
    O = np.zeros(2)
    for name, v in (("P", tr.P), ("Q", tr.Q)):
        spec.curves.append((np.array([O, v]), {"color": "tab:blue", "lw": 1.0}))
        spec.add_point(name, v)
    spec.curves.append((np.array([tr.M, tr.L]), {"color": "tab:gray", "lw": 0.8, "ls": "--"}))
    for name, v in (("M", tr.M), ("L", tr.L), ("T", tr.T), ("P" + PRIME, tr.Pprime)):
        spec.add_point(name, v)
    spec.add_point("O", O)
    for k in range(2):
        spec.lines.append((O, tr.axis_dirs[:, k], {"color": "tab:red", "lw": 0.8}))
    if tr.T is not None:
        spec.lines.append((O, tr.M, {"color": "tab:gray", "lw": 0.6, "ls": ":"}))
        spec.curves.append((np.array([tr.P, tr.T]), {"color": "tab:green", "lw": 0.8}))
        spec.curves.append((np.array([tr.P, tr.Pprime]), {"color": "tab:green", "lw": 0.8}))
    return spec


def focal_spec(trace: ChaslesTrace) -> FigureSpec:
    """Dual focal ellipse (x, y) and hyperbola (x, z) laid out in one plane."""
    if trace.conics is None:
        raise InputError("trace has no focal conics (special branch)")
    a, b = trace.conics.a, trace.conics.b
    spec = FigureSpec("Focal conics at P (ellipse in x-y, hyperbola in x-z)")
    spec.curves.append((_ellipse(math.sqrt(a + b), math.sqrt(b)), {"color": "tab:blue", "lw": 1.2}))
    reach = 2.0 * math.sqrt(a + b)
    for br in _hyperbola(math.sqrt(a), math.sqrt(b), reach):
        spec.curves.append((br, {"color": "tab:orange", "lw": 1.2}))
    spec.add_point("P", (0.0, 0.0))
    spec.add_point("A", (math.sqrt(a + b), 0.0))
    spec.add_point("B", (-math.sqrt(a + b), 0.0))
    spec.add_point("F1", (math.sqrt(a), 0.0))
    spec.add_point("F2", (-math.sqrt(a), 0.0))
    xp, yp, zp = trace.frame.apex
    spec.add_point("O(x,y)", (xp, yp))
    spec.add_point("O(x,z)", (xp, zp))
    spec.lines.append((np.zeros(2), np.array([1.0, 0.0]), {"color": "tab:gray", "lw": 0.6}))
    return spec


def projection_spec(trace: ChaslesTrace) -> FigureSpec:
    """Image E' of the focal ellipse in the hyperbola plane, with the fixed line m."""
    if trace.projection is None or trace.conics is None:
        raise InputError("trace has no projection (special branch)")
    pr = trace.projection
    a, b = trace.conics.a, trace.conics.b
    spec = FigureSpec("Central projection of the focal ellipse from O")
    for br in _hyperbola(math.sqrt(a), math.sqrt(b), 3.0 * math.sqrt(a + b)):
        spec.curves.append((br, {"color": "tab:orange", "lw": 1.2}))
    spec.implicit.append((pr.coeffs, {"color": "tab:blue"}))
    spec.lines.append((np.zeros(2), np.array([1.0, 0.0]), {"color": "tab:gray", "lw": 0.8}))
    names = {"A": "A", "B": "B", "C_bar": "C" + BAR, "D_bar": "D" + BAR, "E_bar": "E" + BAR, "F_bar": "F" + BAR}
    for key, label in names.items():
        spec.add_point(label, pr.annotations.get(key))
    spec.add_point("m", (-1.6 * math.sqrt(a + b), 0.0))
    if trace.edges is not None and len(trace.edges.points):
        xp, yp, zp = trace.frame.apex
        for k, (x, y, _) in enumerate(trace.edges.points):
            t = yp / (yp - y)
            spec.add_point(f"X{k + 1}", (xp + t * (x - xp), zp - t * zp))
    pts = np.array(list(spec.points.values()))
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1.0)
    spec.viewport = (lo[0] - 0.3 * span, hi[0] + 0.3 * span, lo[1] - 0.3 * span, hi[1] + 0.3 * span)
    return spec


def axes_spec(trace: ChaslesTrace, directions: np.ndarray, lengths) -> FigureSpec:
    """Principal plane of the two longest axes: section ellipse, edges and P."""
    d1, d2 = directions[:, 0], directions[:, 1]
    B = np.column_stack([d1, d2])
    spec = FigureSpec("Axes from the common edges (plane of the two longest axes)")
    spec.curves.append((_ellipse(lengths[0], lengths[1]), {"color": "k", "lw": 1.2}))
    spec.add_point("O", (0.0, 0.0))
    spec.add_point("P", B.T @ trace.frame.P)
    if trace.edges is not None:
        for k, u in enumerate(trace.edges.directions):
            uu = B.T @ u
            if np.linalg.norm(uu) > 1e-9:
                spec.lines.append((np.zeros(2), uu, {"color": "tab:green", "lw": 0.6, "ls": "--"}))
    for k, (name, d) in enumerate((("a1", d1), ("a2", d2))):
        end = np.zeros(2)
        end[k] = lengths[k]
        spec.curves.append((np.array([np.zeros(2), end]), {"color": "tab:red", "lw": 1.5}))
        spec.add_point(name, end)
    r = 1.3 * max(lengths[0], float(np.linalg.norm(trace.frame.P)))
    spec.viewport = (-r, r, -r, r)
    return spec
