"""Gauss map sampling and asymptotic curves on graph patches ``z = F(x, y)``.

On a surface with zero Gaussian curvature the differential of the Gauss map
has rank at most one.  Where the mean curvature is non-zero its kernel is a
well defined line field (the asymptotic, or ruling, direction) and its
integral curves are straight segments along which the normal is constant.
This module samples ``dn`` by finite differences, traces the kernel field,
and runs the connector experiment: push points of the slice ``X = 1`` along
asymptotic segments to the slice ``X = delta`` and measure how much the
induced map stretches distances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BoundaryPoint, FlatPointReached, NormalizationFailed

EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class SurfacePatch:
    """Graph of ``F`` over a disk, with analytic or spline gradient.

    ``F(x, y)`` and ``grad(x, y) -> (Fx, Fy)`` take broadcastable arrays.
    ``h`` is the finite-difference step used for the shape operator.
    """

    name: str
    F: Callable
    grad: Callable
    radius: float
    center: tuple = (0.0, 0.0)
    h: float = 1e-4
    params: dict = field(default_factory=dict)
    box: tuple | None = None  # (xmin, xmax, ymin, ymax) for grid patches

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("finite-difference step must be positive")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains(self, xy, margin: float = 0.0) -> np.ndarray:
        xy = np.asarray(xy, dtype=float)
        d = np.hypot(xy[..., 0] - self.center[0], xy[..., 1] - self.center[1])
        inside = d <= self.radius - margin
        if self.box is not None:
            x0, x1, y0, y1 = self.box
            inside &= (xy[..., 0] >= x0 + margin) & (xy[..., 0] <= x1 - margin)
            inside &= (xy[..., 1] >= y0 + margin) & (xy[..., 1] <= y1 - margin)
        return inside

    def point(self, xy) -> np.ndarray:
        xy = np.asarray(xy, dtype=float)
        return np.concatenate([xy, np.asarray(self.F(xy[..., 0], xy[..., 1]))[..., None]], axis=-1)

    def normal(self, xy) -> np.ndarray:
        xy = np.asarray(xy, dtype=float)
        fx, fy = self.grad(xy[..., 0], xy[..., 1])
        fx, fy = np.broadcast_arrays(np.asarray(fx, dtype=float), np.asarray(fy, dtype=float))
        n = np.stack([-fx, -fy, np.ones_like(fx)], axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)


# ----------------------------------------------------------------------------
# presets

def plane(radius: float = 3.0, **kw) -> SurfacePatch:
    return SurfacePatch(
        "plane",
        lambda x, y: np.zeros(np.broadcast(x, y).shape),
        lambda x, y: (np.zeros(np.broadcast(x, y).shape), np.zeros(np.broadcast(x, y).shape)),
        radius, **kw,
    )


def parabolic_cylinder(C: float = 1.0, radius: float = 3.0, **kw) -> SurfacePatch:
    """``F = C y^2``: the normal form of a flat surface with a ruling along the x-axis."""
    return SurfacePatch(
        "parabolic-cylinder",
        lambda x, y: C * np.asarray(y, dtype=float) ** 2 + 0 * np.asarray(x, dtype=float),
        lambda x, y: (0 * np.asarray(x, dtype=float) + 0 * np.asarray(y, dtype=float), 2 * C * np.asarray(y, dtype=float) + 0 * np.asarray(x, dtype=float)),
        radius, params={"C": C}, **kw,
    )


def cylinder(rho: float = 1.0, radius: float | None = None, **kw) -> SurfacePatch:
    """Round cylinder ``F = sqrt(rho^2 - y^2)`` with axis along x."""
    radius = 0.9 * rho if radius is None else radius
    if radius >= rho:
        raise ValueError("patch radius must stay inside the cylinder")

    def F(x, y):
        y = np.asarray(y, dtype=float)
        return np.sqrt(rho * rho - y * y) + 0 * np.asarray(x, dtype=float)

    def grad(x, y):
        y = np.asarray(y, dtype=float)
        f = np.sqrt(rho * rho - y * y)
        return 0 * f + 0 * np.asarray(x, dtype=float), -y / f + 0 * np.asarray(x, dtype=float)

    return SurfacePatch("cylinder", F, grad, radius, params={"rho": rho}, **kw)


def cone(C: float = 0.2, L: float = 6.0, radius: float = 3.0, **kw) -> SurfacePatch:
    """``F = C y^2 / (L - x)``: a cone with apex ``(L, 0, 0)``, ``~ (C/L) y^2`` near 0."""
    if radius >= L:
        raise ValueError("the apex must lie outside the patch")

    def F(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return C * y * y / (L - x)

    def grad(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d = L - x
        return C * y * y / (d * d), 2 * C * y / d

    return SurfacePatch("cone", F, grad, radius, params={"C": C, "L": L}, **kw)


def sphere(rho: float = 1.0, radius: float | None = None, **kw) -> SurfacePatch:
    radius = 0.9 * rho if radius is None else radius
    if radius >= rho:
        raise ValueError("patch radius must stay inside the sphere")

    def F(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.sqrt(rho * rho - x * x - y * y)

    def grad(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        f = np.sqrt(rho * rho - x * x - y * y)
        return -x / f, -y / f

    return SurfacePatch("sphere", F, grad, radius, params={"rho": rho}, **kw)


def generalized_cylinder(coeffs=(0.4, 0.0, 0.0), angle: float = 0.0, radius: float = 1.0, **kw) -> SurfacePatch:
    """``F = phi(u)``, ``u = -sin(a) x + cos(a) y``, ``phi = c2 u^2 + c3 u^3 + c4 u^4``."""
    c2, c3, c4 = coeffs
    s, c = math.sin(angle), math.cos(angle)

    def F(x, y):
        u = -s * np.asarray(x, dtype=float) + c * np.asarray(y, dtype=float)
        return c2 * u**2 + c3 * u**3 + c4 * u**4

    def grad(x, y):
        u = -s * np.asarray(x, dtype=float) + c * np.asarray(y, dtype=float)
        d = 2 * c2 * u + 3 * c3 * u**2 + 4 * c4 * u**3
        return -s * d, c * d

    return SurfacePatch("generalized-cylinder", F, grad, radius,
                        params={"coeffs": tuple(coeffs), "angle": angle}, **kw)


def generalized_cone(coeffs=(0.4, 0.0), L: float = 4.0, angle: float = 0.0, radius: float = 1.0, **kw) -> SurfacePatch:
    """Cone over ``psi(u) = c2 u^2 + c3 u^3`` with apex at distance ``L`` in direction ``angle``."""
    c2, c3 = coeffs
    s, c = math.sin(angle), math.cos(angle)
    if radius >= L:
        raise ValueError("the apex must lie outside the patch")

    def _uv(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        xp = c * x + s * y
        yp = -s * x + c * y
        D = L - xp
        return D, yp / D

    def F(x, y):
        D, u = _uv(x, y)
        return D * (c2 * u**2 + c3 * u**3)

    def grad(x, y):
        D, u = _uv(x, y)
        psi = c2 * u**2 + c3 * u**3
        dpsi = 2 * c2 * u + 3 * c3 * u**2
        fxp = -psi + u * dpsi
        fyp = dpsi
        return fxp * c - fyp * s, fxp * s + fyp * c

    return SurfacePatch("generalized-cone", F, grad, radius,
                        params={"coeffs": tuple(coeffs), "L": L, "angle": angle}, **kw)


PRESETS = {
    "plane": plane,
    "parabolic-cylinder": parabolic_cylinder,
    "cylinder": cylinder,
    "cone": cone,
    "sphere": sphere,
}


def preset(name: str, **params) -> SurfacePatch:
    try:
        return PRESETS[name](**params)
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def random_developable(rng, kind: str | None = None) -> SurfacePatch:
    """Random generalized cylinder or cone with non-vanishing mean curvature on the unit disk."""
    kind = kind or ("cylinder" if rng.random() < 0.5 else "cone")
    angle = rng.uniform(0, 2 * math.pi)
    sign = rng.choice([-1.0, 1.0])
    if kind == "cylinder":
        coeffs = (sign * rng.uniform(0.3, 0.6), rng.uniform(-0.03, 0.03), rng.uniform(-0.01, 0.01))
        return generalized_cylinder(coeffs, angle)
    coeffs = (sign * rng.uniform(0.3, 0.6), rng.uniform(-0.05, 0.05))
    return generalized_cone(coeffs, L=rng.uniform(3.0, 6.0), angle=angle)


def patch_from_grid(xs, ys, Z, h: float = 1e-4, name: str = "grid") -> SurfacePatch:
    """Quintic spline patch through samples ``Z[i, j] = F(xs[i], ys[j])``."""
    from scipy.interpolate import RectBivariateSpline

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (xs.size, ys.size):
        raise ValueError("grid shape does not match axes")
    if not np.all(np.isfinite(Z)):
        raise ValueError("grid samples must be finite")
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
        raise ValueError("grid axes must be strictly increasing")
    k = min(5, xs.size - 1, ys.size - 1)
    spl = RectBivariateSpline(xs, ys, Z, kx=k, ky=k, s=0)

    def F(x, y):
        return spl.ev(x, y)

    def grad(x, y):
        return spl.ev(x, y, dx=1), spl.ev(x, y, dy=1)

    box = (xs[0], xs[-1], ys[0], ys[-1])
    cx, cy = 0.5 * (xs[0] + xs[-1]), 0.5 * (ys[0] + ys[-1])
    # the largest disk about the origin (or the box centre) inside the box
    ox, oy = (0.0, 0.0) if (xs[0] < 0 < xs[-1] and ys[0] < 0 < ys[-1]) else (cx, cy)
    radius = min(ox - xs[0], xs[-1] - ox, oy - ys[0], ys[-1] - oy)
    return SurfacePatch(name, F, grad, radius, center=(ox, oy), h=h, box=box)


def load_grid_csv(path, h: float = 1e-4) -> SurfacePatch:
    """Read ``x,y,z`` rows (optional header) covering a full rectangular grid."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    skip = 0
    try:
        [float(v) for v in first.strip().split(",")]
    except ValueError:
        skip = 1
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    if data.shape[1] != 3:
        raise ValueError("grid CSV needs exactly three columns x,y,z")
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    if xs.size * ys.size != data.shape[0]:
        raise ValueError("grid CSV rows do not form a complete rectangular grid")
    Z = np.full((xs.size, ys.size), np.nan)
    Z[np.searchsorted(xs, data[:, 0]), np.searchsorted(ys, data[:, 1])] = data[:, 2]
    return patch_from_grid(xs, ys, Z, h=h, name=str(path))


# ----------------------------------------------------------------------------
# Gauss map

@dataclass(frozen=True, eq=False)
class GaussSample:
    p: np.ndarray  # surface point
    n: np.ndarray  # unit normal
    dn: np.ndarray  # 2x2 in the frame (e1, e2)
    frame: np.ndarray  # rows e1, e2 (tangent, orthonormal)
    v: np.ndarray  # unit kernel direction
    w: np.ndarray  # v x n
    singular_values: np.ndarray
    mean_curvature_nonzero: bool


def _tangent_frame(patch: SurfacePatch, xy):
    fx, fy = patch.grad(xy[0], xy[1])
    rx = np.array([1.0, 0.0, float(fx)])
    e1 = rx / np.linalg.norm(rx)
    n = patch.normal(xy)
    e2 = np.cross(n, e1)
    return e1, e2, n


def _sign_fix(v):
    if abs(v[0]) > 1e-12:
        return v if v[0] > 0 else -v
    return v if v[1] >= 0 else -v


def gauss_sample(patch: SurfacePatch, p, h: float | None = None, flat_threshold: float | None = None,
                 prefer=None) -> GaussSample:
    """Normal, shape operator, kernel direction at the point over ``p = (x, y)``.

    ``prefer`` (a 3-vector) picks the sign of ``v``; otherwise ``v`` has
    positive x component, or positive y component when that vanishes.
    """
    h = patch.h if h is None else h
    xy = np.asarray(p, dtype=float)[:2]
    if not patch.contains(xy, margin=2 * h):
        raise BoundaryPoint(f"point {tuple(xy)} is not interior to the patch")
    thr = 10 * EPS / h**2 if flat_threshold is None else flat_threshold
    e1, e2, n = _tangent_frame(patch, xy)
    cols = []
    for e in (e1, e2):
        # a tangent vector e = r_x * e[0] + r_y * e[1] since r_x, r_y have unit x/y parts
        xi = e[:2]
        dn_e = (patch.normal(xy + h * xi) - patch.normal(xy - h * xi)) / (2 * h)
        cols.append([dn_e @ e1, dn_e @ e2])
    M = np.array(cols).T
    _, sv, Vt = np.linalg.svd(M)
    k2 = Vt[-1]
    v = k2[0] * e1 + k2[1] * e2
    v = v / np.linalg.norm(v)
    if prefer is not None:
        v = v if v @ np.asarray(prefer) >= 0 else -v
    else:
        v = _sign_fix(v)
    w = np.cross(v, n)
    return GaussSample(patch.point(xy), n, M, np.array([e1, e2]), v, w, sv, bool(sv[0] > thr))


# ----------------------------------------------------------------------------
# tracing

@dataclass(frozen=True, eq=False)
class Trace:
    points: np.ndarray  # (k, 3) on the surface
    params: np.ndarray  # (k, 2)
    normals: np.ndarray  # (k, 3)
    stop: str  # "length", "boundary" or "target"

    @property
    def length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.points, axis=0), axis=1)))

    def chord_deviation(self) -> float:
        """Largest distance of a vertex from the end-to-end chord, over its length."""
        a, b = self.points[0], self.points[-1]
        d = b - a
        L = np.linalg.norm(d)
        if L == 0:
            return 0.0
        rel = self.points - a
        perp = rel - np.outer(rel @ d / (L * L), d)
        return float(np.max(np.linalg.norm(perp, axis=1)) / L)

    def normal_spread(self) -> float:
        """Largest angle between the first normal and any later one."""
        c = np.clip(self.normals @ self.normals[0], -1.0, 1.0)
        return float(np.max(np.arccos(c)))


def trace_asymptotic(patch: SurfacePatch, p0, step: float = 0.01, max_len: float = 1.0, direction=None,
                     h: float | None = None, flat_threshold: float | None = None, stop_x: float | None = None,
                     mask=None) -> Trace:
    """Integrate the kernel field from ``p0`` with the midpoint rule.

    Stops at ``max_len`` (3D arc length), the patch boundary, the plane
    ``X = stop_x`` (hit exactly by a final partial step) or a point outside
    ``mask``.  Raises :class:`FlatPointReached` with the partial polyline on
    entering the zero-mean-curvature set.
    """
    if step <= 0 or max_len <= 0:
        raise ValueError("step and max_len must be positive")
    h = patch.h if h is None else h
    xy = np.asarray(p0, dtype=float)[:2]
    s0 = gauss_sample(patch, xy, h, flat_threshold, prefer=direction)
    if not s0.mean_curvature_nonzero:
        raise FlatPointReached("start point has zero mean curvature", polyline=np.array([s0.p]))
    prev = s0.v
    pts, prm, nrm = [s0.p], [xy.copy()], [s0.n]
    total = 0.0
    stop = "length"
    margin = 2.5 * h

    def kernel(q, ref):
        gs = gauss_sample(patch, q, h, flat_threshold, prefer=ref)
        if not gs.mean_curvature_nonzero:
            raise FlatPointReached("reached zero mean curvature", polyline=np.array(pts))
        return gs

    while total < max_len - 1e-15:
        ds = min(step, max_len - total)
        # v = a r_x + b r_y has v[:2] = (a, b), so parameter steps track arc length
        mid = xy + 0.5 * ds * prev[:2]
        if not patch.contains(mid, margin):
            stop = "boundary"
            break
        gm = kernel(mid, prev)
        nxt = xy + ds * gm.v[:2]
        if stop_x is not None and (nxt[0] - stop_x) * (xy[0] - stop_x) <= 0 and nxt[0] != xy[0]:
            frac = (stop_x - xy[0]) / (nxt[0] - xy[0])
            nxt = xy + frac * ds * gm.v[:2]
            nxt[0] = stop_x
            stop = "target"
        if not patch.contains(nxt, margin) or (mask is not None and not mask(nxt)):
            stop = "boundary"
            break
        gs = kernel(nxt, gm.v)
        pts.append(gs.p)
        prm.append(nxt.copy())
        nrm.append(gs.n)
        total += float(np.linalg.norm(pts[-1] - pts[-2]))
        xy, prev = nxt, gs.v
        if stop == "target":
            break
    return Trace(np.array(pts), np.array(prm), np.array(nrm), stop)


# ----------------------------------------------------------------------------
# connector experiment

@dataclass
class ExpansionStats:
    max_ratio: float
    mean_ratio: float
    min_ratio: float
    n_connectors: int
    n_pairs: int
    n_discarded: int
    max_slope_sq: float

    @property
    def below_three(self) -> bool:
        return self.max_ratio < 3.0


def check_normalization(patch: SurfacePatch, radius: float = 3.0, n: int = 121):
    """Graph over the radius-3 disk with projections shrinking distances by less than 2/3.

    For a graph over a convex domain the worst ratio ``|p1' - p2'| / |p1 - p2|``
    is ``1 / sqrt(1 + max |grad F|^2)``, which exceeds 2/3 exactly when
    ``max |grad F|^2 < 5/4``.  Returns that maximum.
    """
    if patch.radius < radius - 1e-12:
        raise NormalizationFailed(f"patch radius {patch.radius} is below {radius}")
    g = np.linspace(-radius, radius, n)
    X, Y = np.meshgrid(g + patch.center[0], g + patch.center[1], indexing="ij")
    inside = np.hypot(X - patch.center[0], Y - patch.center[1]) <= radius * (1 - 1e-9)
    fx, fy = patch.grad(X[inside], Y[inside])
    slope = float(np.max(np.asarray(fx) ** 2 + np.asarray(fy) ** 2))
    if not slope < 1.25:
        raise NormalizationFailed(f"max |grad F|^2 = {slope:.4f} violates the 2/3 projection bound")
    return slope


def polygon_mask(vertices):
    """Membership test for a closed polygon in the XY-plane."""
    from matplotlib.path import Path as MplPath

    path = MplPath(np.asarray(vertices, dtype=float))
    return lambda xy: bool(path.contains_point(tuple(np.asarray(xy)[:2])))


def connector_experiment(patch: SurfacePatch, delta: float = 0.05, neighborhood: float = 0.2, n_seeds: int = 9,
                         step: float = 0.01, mask=None, check: bool = True) -> ExpansionStats:
    """Push seeds on ``X = 1`` along asymptotic segments to ``X = delta``.

    Seeds sit at ``(1, y)`` with ``|y| <= neighborhood``; each connector is
    traced towards decreasing ``X``.  Returns statistics of
    ``|b_i - b_j| / |a_i - a_j|`` over all seed pairs.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    slope = check_normalization(patch) if check else math.nan
    if mask is not None and not callable(mask):
        mask = polygon_mask(mask)
    ys = np.linspace(-neighborhood, neighborhood, n_seeds)
    A, B = [], []
    discarded = 0
    for y in ys:
        seed = np.array([1.0, y])
        if mask is not None and not mask(seed):
            discarded += 1
            continue
        tr = trace_asymptotic(patch, seed, step=step, max_len=10.0, direction=np.array([-1.0, 0.0, 0.0]),
                              stop_x=delta, mask=mask)
        if tr.stop != "target":
            discarded += 1
            continue
        A.append(tr.points[0])
        B.append(tr.points[-1])
    A, B = np.array(A), np.array(B)
    if len(A) < 2:
        raise NormalizationFailed("fewer than two connectors reached X = delta")
    i, j = np.triu_indices(len(A), 1)
    ratios = np.linalg.norm(B[i] - B[j], axis=1) / np.linalg.norm(A[i] - A[j], axis=1)
    return ExpansionStats(float(ratios.max()), float(ratios.mean()), float(ratios.min()), len(A), len(ratios),
                          discarded, slope)
