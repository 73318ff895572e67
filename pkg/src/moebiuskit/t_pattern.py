"""Search for T-patterns by topological degree.

Unordered pairs of distinct bends, with the two limit points added, form a
sphere.  The chart

    (theta, phi)  ->  (x0, x1) = (theta - phi, theta + phi),   0 < phi < pi,

covers it minus the poles; ``phi -> 0`` is the pole where ``x1`` is just
ahead of ``x0`` and ``phi -> pi`` the one where it is just behind.  Swapping
the two bends is the antipodal map ``(theta, phi) -> (theta + pi, pi - phi)``.

Orient bend ``x0`` arbitrarily and carry the orientation forward along the
band to ``x1``.  ``F = (g, h)`` of the two oriented carrier lines does not
depend on the seed, tends to ``(+-1, 0)`` at the poles and is odd under the
antipodal map.  Zeros of ``F`` are T-patterns.  We locate them by winding
numbers of ``F`` around rectangle boundaries in the chart.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContinuityError, EndpointError, NotFound, NotParallel, PoleError, ZeroOnPath
from .line_geometry import OrientedLine, is_perpendicular_intersecting
from .segments import segment_distance
from .strip_model import RuledStrip, lift_strip

TWO_PI = 2.0 * math.pi
MAX_STEP = math.pi / 4  # largest angle increment accepted without refining


# ----------------------------------------------------------------------------
# chart

@dataclass(frozen=True)
class SpherePoint:
    theta: float = 0.0
    phi: float = math.pi / 2
    pole: str | None = None  # "+", "-" or None

    @classmethod
    def north(cls) -> "SpherePoint":
        return cls(pole="+")

    @classmethod
    def south(cls) -> "SpherePoint":
        return cls(pole="-")

    def antipode(self) -> "SpherePoint":
        if self.pole == "+":
            return SpherePoint.south()
        if self.pole == "-":
            return SpherePoint.north()
        return SpherePoint((self.theta + math.pi) % TWO_PI, math.pi - self.phi)


@dataclass(frozen=True)
class BendPair:
    x0: float
    x1: float

    def swapped(self) -> "BendPair":
        return BendPair(self.x1, self.x0)


def sphere_to_pair(p: SpherePoint) -> BendPair:
    if p.pole is not None:
        raise PoleError("poles carry no bend pair")
    if not (0.0 < p.phi < math.pi):
        raise PoleError(f"phi = {p.phi} outside (0, pi)")
    return BendPair((p.theta - p.phi) % TWO_PI, (p.theta + p.phi) % TWO_PI)


def pair_to_sphere(pair: BendPair) -> SpherePoint:
    d = (pair.x1 - pair.x0) % TWO_PI
    if d == 0.0:
        raise PoleError("equal parameters")
    phi = d / 2
    return SpherePoint((pair.x0 + phi) % TWO_PI, phi)


# ----------------------------------------------------------------------------
# line fields

class LineField:
    """Antiperiodic field of oriented lines ``x -> (anchor, unit direction)``.

    Subclasses implement ``_eval(r)`` for ``r`` in ``[0, period)``; the field
    at ``r + k * period`` is the same line with direction times ``(-1)**k``.
    """

    period: float = TWO_PI

    def _eval(self, r):
        raise NotImplementedError

    def lines(self, x):
        x = np.asarray(x, dtype=float)
        k = np.floor(x / self.period)
        r = x - k * self.period
        r = np.where(r >= self.period, 0.0, r)
        k = np.where(x - k * self.period >= self.period, k + 1, k)
        m, u = self._eval(r)
        sign = np.where(np.mod(k, 2) == 0, 1.0, -1.0)
        return m, u * sign[..., None]

    def F(self, x0, x1):
        """``(g, h)`` for oriented lines at ``x0`` and ``x1`` (real parameters)."""
        m0, u0 = self.lines(x0)
        m1, u1 = self.lines(x1)
        g = np.einsum("...i,...i->...", u0, u1)
        h = np.einsum("...i,...i->...", m0 - m1, np.cross(u0, u1))
        return g, h

    def F_sphere(self, theta, phi):
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        scale = self.period / TWO_PI
        return self.F((theta - phi) * scale, (theta + phi) * scale)


class BendField(LineField):
    """Bends of a :class:`RuledStrip`, interpolated linearly between samples.

    The parameter is the strip's ``s``; orientation is bottom-to-top in the
    continuous lift, which is the propagated orientation, and the sample
    after the last one is the first bend reversed.
    """

    def __init__(self, strip: RuledStrip, check_continuity: bool = True):
        self.strip = strip
        lifted = lift_strip(strip)
        self.lifted = lifted
        flat, space = lifted.closed()
        self._flat = flat
        self._space = space
        s0 = float(strip.s[0])
        self._s = np.append(strip.s, s0 + TWO_PI)
        self._s0 = s0
        d = space[:, 1] - space[:, 0]
        self._dir = d / np.linalg.norm(d, axis=1, keepdims=True)
        if check_continuity:
            dots = np.einsum("ij,ij->i", self._dir[:-1], self._dir[1:])
            if np.any(dots <= 0):
                i = int(np.argmin(dots))
                raise ContinuityError(f"bend orientation jumps between samples {i} and {i + 1}")

    def _locate(self, r):
        # r in [0, 2 pi) measured from s0
        xs = self._s0 + r
        i = np.clip(np.searchsorted(self._s, xs, side="right") - 1, 0, len(self._s) - 2)
        w = (xs - self._s[i]) / (self._s[i + 1] - self._s[i])
        return i, w

    def _eval(self, r):
        i, w = self._locate(r)
        w = w[..., None]
        e0 = (1 - w) * self._space[i, 0] + w * self._space[i + 1, 0]
        e1 = (1 - w) * self._space[i, 1] + w * self._space[i + 1, 1]
        d = e1 - e0
        return 0.5 * (e0 + e1), d / np.linalg.norm(d, axis=-1, keepdims=True)

    def lines(self, x):
        x = np.asarray(x, dtype=float)
        return super().lines(x - self._s0)

    def segment_at(self, x) -> np.ndarray:
        """Space endpoints ``[start, end]`` of the oriented bend at ``x``."""
        x = float(x) - self._s0
        k = math.floor(x / TWO_PI)
        i, w = self._locate(np.array(x - k * TWO_PI))
        e0 = (1 - w) * self._space[i, 0] + w * self._space[i + 1, 0]
        e1 = (1 - w) * self._space[i, 1] + w * self._space[i + 1, 1]
        return np.array([e0, e1]) if k % 2 == 0 else np.array([e1, e0])

    def flat_at(self, x) -> np.ndarray:
        """Lifted pre-bend ``[bottom, top]`` at parameter ``x`` in ``[s0, s0 + 2 pi)``."""
        x = float(x) - self._s0
        r = x % TWO_PI
        i, w = self._locate(np.array(r))
        return (1 - w) * self._flat[i] + w * self._flat[i + 1]


class FunctionLineField(LineField):
    """Line family ``t -> OrientedLine`` on ``[0, 1]`` with ``L(1) = L(0)`` reversed."""

    def __init__(self, family: Callable[[float], OrientedLine], vectorized=None):
        self.period = 1.0
        self.family = family
        self.vectorized = vectorized

    def _eval(self, r):
        if self.vectorized is not None:
            return self.vectorized(r)
        flat = np.ravel(r)
        ms = np.empty((flat.size, 3))
        us = np.empty((flat.size, 3))
        for j, t in enumerate(flat):
            L = self.family(float(t))
            ms[j], us[j] = L.anchor, L.direction
        return ms.reshape(np.shape(r) + (3,)), us.reshape(np.shape(r) + (3,))


class SampledLineField(LineField):
    """Lines sampled at increasing ``t`` in ``[0, 1]``, interpolated linearly."""

    def __init__(self, ts, anchors, directions):
        self.period = 1.0
        self.ts = np.asarray(ts, dtype=float)
        self.anchors = np.asarray(anchors, dtype=float)
        self.dirs = np.asarray(directions, dtype=float)

    def _eval(self, r):
        i = np.clip(np.searchsorted(self.ts, r, side="right") - 1, 0, len(self.ts) - 2)
        w = ((r - self.ts[i]) / (self.ts[i + 1] - self.ts[i]))[..., None]
        m = (1 - w) * self.anchors[i] + w * self.anchors[i + 1]
        u = (1 - w) * self.dirs[i] + w * self.dirs[i + 1]
        return m, u / np.linalg.norm(u, axis=-1, keepdims=True)


class StubField:
    """Wrap a callable ``(theta, phi) -> (g, h)`` for the sphere search."""

    def __init__(self, fn):
        self.fn = fn

    def F_sphere(self, theta, phi):
        return self.fn(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))


def as_sphere_field(obj):
    if isinstance(obj, RuledStrip):
        return BendField(obj)
    if hasattr(obj, "F_sphere"):
        return obj
    if callable(obj):
        return StubField(obj)
    raise TypeError(f"cannot search on {type(obj).__name__}")


# ----------------------------------------------------------------------------
# orientation and F on strips

def propagate_orientation(strip, x0: float, x1: float, dir0, tol: float = 1e-6) -> np.ndarray:
    """Carry the orientation ``dir0`` of bend ``x0`` forward along the band to bend ``x1``."""
    field_ = strip if isinstance(strip, BendField) else BendField(strip)
    dir0 = np.asarray(dir0, dtype=float)
    dir0 = dir0 / np.linalg.norm(dir0)
    _, u0 = field_.lines(x0)
    c = float(u0 @ dir0)
    if abs(abs(c) - 1.0) > tol:
        raise NotParallel(f"dir0 is not parallel to bend({x0}): |cos| = {abs(c):.9f}")
    x1p = x0 + ((x1 - x0) % TWO_PI)
    if x1p == x0 and x1 != x0:
        x1p = x0 + TWO_PI
    _, u1 = field_.lines(x1p)
    return np.sign(c) * u1


def F_eval(strip, pair: BendPair) -> tuple[float, float]:
    """``(g, h)`` of the pair, orientation carried from ``x0`` forward to ``x1``."""
    field_ = strip if isinstance(strip, BendField) else BendField(strip)
    d = (pair.x1 - pair.x0) % TWO_PI
    if d == 0.0:
        return 1.0, 0.0
    g, h = field_.F(pair.x0, pair.x0 + d)
    return float(g), float(h)


# ----------------------------------------------------------------------------
# winding numbers

def _angles(g, h):
    return np.arctan2(h, g)


def _wrap(d):
    return (d + math.pi) % TWO_PI - math.pi


def _path_increment(field_, pts, zero_tol, max_refine=12):
    """Continuous angle change of F along the chart polyline ``pts`` (k, 2)."""
    pts = np.asarray(pts, dtype=float)
    g, h = field_.F_sphere(pts[:, 0], pts[:, 1])
    r = np.hypot(g, h)
    if np.any(r < zero_tol):
        j = int(np.argmin(r))
        raise ZeroOnPath("F vanishes on the path", point=tuple(pts[j]))
    ang = _angles(g, h)
    total = 0.0
    for j in range(len(pts) - 1):
        d = _wrap(ang[j + 1] - ang[j])
        if abs(d) > MAX_STEP:
            if max_refine <= 0:
                raise ZeroOnPath("angle step unresolved", point=tuple(pts[j]))
            sub = np.linspace(pts[j], pts[j + 1], 9)
            d = _path_increment(field_, sub, zero_tol, max_refine - 1)
        total += d
    return total


@dataclass
class WindingCertificate:
    path: list
    values: np.ndarray
    w: float

    @property
    def half_integral(self) -> bool:
        return abs(2 * self.w - round(2 * self.w)) < 1e-6


def winding_number(strip, meridian, tol: float = 1e-12, refine: bool = True) -> WindingCertificate:
    """Winding of ``F`` along a pole-to-pole path.

    ``meridian`` lists chart points strictly between the poles; the pole
    values ``(1, 0)`` and ``(-1, 0)`` are attached at the ends.
    """
    field_ = as_sphere_field(strip)
    pts = [p for p in meridian if p.pole is None]
    arr = np.array([[p.theta, p.phi] for p in pts])
    g, h = field_.F_sphere(arr[:, 0], arr[:, 1])
    r = np.hypot(g, h)
    if np.any(r < tol):
        j = int(np.argmin(r))
        raise ZeroOnPath("F vanishes on the meridian", point=tuple(arr[j]))
    total = _wrap(math.atan2(h[0], g[0]) - 0.0)
    if refine:
        total += _path_increment(field_, arr, tol)
    else:
        ang = _angles(g, h)
        total += float(np.sum(_wrap(np.diff(ang))))
    total += _wrap(math.pi - math.atan2(h[-1], g[-1]))
    values = np.column_stack([np.r_[1.0, g, -1.0], np.r_[0.0, h, 0.0]])
    path = [SpherePoint.north()] + pts + [SpherePoint.south()]
    return WindingCertificate(path, values, total / TWO_PI)


def meridian(theta: float, n: int = 257, phi_lo: float = 1e-3) -> list:
    phis = np.linspace(phi_lo, math.pi - phi_lo, n)
    return [SpherePoint(theta % TWO_PI, float(p)) for p in phis]


def meridian_winding(field_, theta, n=257, phi_lo=1e-3, tol=1e-12, step=None, retries=3):
    """Winding along the meridian at ``theta``, nudged by ``step/2`` on zero hits."""
    step = step if step is not None else TWO_PI / 512
    th = theta
    for _ in range(retries + 1):
        try:
            return winding_number(field_, meridian(th, n, phi_lo), tol=tol), th
        except ZeroOnPath:
            th = th + step / 2
    raise ZeroOnPath("meridian keeps hitting zeros")


# ----------------------------------------------------------------------------
# degree search

@dataclass
class SearchConfig:
    n_theta: int = 192
    n_phi: int = 96
    phi_lo: float = 1e-3
    max_depth: int = 40
    zero_tol: float = 1e-15
    theta_range: tuple = (0.0, TWO_PI)


@dataclass
class CertifiedZero:
    theta: float
    phi: float
    g: float
    h: float
    winding: int
    depth: int
    cell: tuple

    @property
    def residual(self) -> float:
        return max(abs(self.g), abs(self.h))


class _Grid:
    """Edge increments on a rectangular lattice, shared between neighbouring cells."""

    def __init__(self, field_, thetas, phis, zero_tol):
        self.field = field_
        self.thetas = thetas
        self.phis = phis
        T, P = np.meshgrid(thetas, phis, indexing="ij")
        g, h = field_.F_sphere(T, P)
        r = np.hypot(g, h)
        if np.any(r < zero_tol):
            raise ZeroOnPath("lattice node on a zero")
        self.ang = _angles(g, h)
        self.zero_tol = zero_tol
        # horizontal edges (theta direction) and vertical edges (phi direction)
        self.de_t = _wrap(np.diff(self.ang, axis=0))
        self.de_p = _wrap(np.diff(self.ang, axis=1))
        self._fix(self.de_t, axis=0)
        self._fix(self.de_p, axis=1)

    def _fix(self, de, axis):
        for i, j in np.argwhere(np.abs(de) > MAX_STEP):
            if axis == 0:
                a = (self.thetas[i], self.phis[j])
                b = (self.thetas[i + 1], self.phis[j])
            else:
                a = (self.thetas[i], self.phis[j])
                b = (self.thetas[i], self.phis[j + 1])
            de[i, j] = _path_increment(self.field, np.linspace(a, b, 17), self.zero_tol)

    def windings(self):
        w = self.de_t[:, :-1] + self.de_p[1:, :] - self.de_t[:, 1:] - self.de_p[:-1, :]
        return np.rint(w / TWO_PI).astype(int), w / TWO_PI


def cell_winding(field_, th0, th1, ph0, ph1, zero_tol=1e-15, n_edge=5):
    """Winding number of F around the boundary of a chart rectangle."""
    corners = [(th0, ph0), (th1, ph0), (th1, ph1), (th0, ph1), (th0, ph0)]
    total = 0.0
    for a, b in zip(corners[:-1], corners[1:]):
        total += _path_increment(field_, np.linspace(a, b, n_edge), zero_tol)
    return total / TWO_PI


def _refine(field_, cell, wind, tol, cfg, depth=0):
    th0, th1, ph0, ph1 = cell
    jitter = (0.5 + 0.0137 * math.sin(1.7 * depth + 0.3), 0.5 + 0.0111 * math.cos(2.3 * depth + 0.1))
    for attempt in range(4):
        tc = th0 + (th1 - th0) * (jitter[0] + 0.07 * attempt)
        pc = ph0 + (ph1 - ph0) * (jitter[1] - 0.05 * attempt)
        g, h = field_.F_sphere(np.array(tc), np.array(pc))
        g, h = float(g), float(h)
        if max(abs(g), abs(h)) <= tol:
            return CertifiedZero(tc, pc, g, h, wind, depth, cell)
        if depth >= cfg.max_depth:
            return None
        children = [(th0, tc, ph0, pc), (tc, th1, ph0, pc), (th0, tc, pc, ph1), (tc, th1, pc, ph1)]
        try:
            ws = [cell_winding(field_, *c, zero_tol=cfg.zero_tol) for c in children]
        except ZeroOnPath:
            continue
        for c, w in zip(children, ws):
            wi = int(round(w))
            if wi != 0:
                found = _refine(field_, c, wi, tol, cfg, depth + 1)
                if found is not None:
                    return found
        return None
    return None


def _phi_nodes(n, phi_lo, offset):
    # interior rows are moved off the symmetric values (pi/2 in particular),
    # which symmetric bands like to put zeros on
    u = (np.arange(n + 1) + offset) / n
    u[0], u[-1] = 0.0, 1.0
    return phi_lo + (math.pi - 2 * phi_lo) * u


def certified_zeros(field_, tol: float = 1e-10, config: SearchConfig | None = None, all_zeros: bool = True):
    """All zeros of F certified by non-zero cell winding, sorted by (theta, phi)."""
    cfg = config or SearchConfig()
    field_ = as_sphere_field(field_)
    lo, hi = cfg.theta_range
    shift = 0.0
    for attempt in range(4):
        thetas = np.linspace(lo, hi, cfg.n_theta + 1) + shift
        phis = _phi_nodes(cfg.n_phi, cfg.phi_lo, 0.1234 + 0.2 * attempt)
        try:
            grid = _Grid(field_, thetas, phis, cfg.zero_tol)
            break
        except ZeroOnPath:
            shift += 0.5 * (hi - lo) / cfg.n_theta * (0.37 + 0.1 * attempt)
    else:
        raise NotFound("lattice repeatedly hits zeros of F")
    wind, _ = grid.windings()
    zeros = []
    for i, j in np.argwhere(wind != 0):
        cell = (thetas[i], thetas[i + 1], phis[j], phis[j + 1])
        z = _refine(field_, cell, int(wind[i, j]), tol, cfg)
        if z is not None:
            z.theta = z.theta % TWO_PI
            zeros.append(z)
            if not all_zeros:
                break
    zeros.sort(key=lambda z: (z.theta, z.phi))
    return zeros, int(np.count_nonzero(wind))


# ----------------------------------------------------------------------------
# T-patterns on strips

@dataclass
class TPattern:
    bends: np.ndarray  # (2, 2, 3), oriented as propagated
    residual_g: float
    residual_h: float
    min_distance: float
    source: BendPair
    sphere: SpherePoint
    winding: int
    certificate: tuple = ()
    lines: tuple = field(default_factory=tuple)

    def carriers_ok(self, tol: float = 1e-8) -> bool:
        L0, L1 = self.lines
        return is_perpendicular_intersecting(L0, L1, tol)


def _pattern_from_zero(bf: BendField, z: CertifiedZero, cert=()) -> TPattern:
    x0, x1 = z.theta - z.phi, z.theta + z.phi
    seg0 = bf.segment_at(x0)
    seg1 = bf.segment_at(x1)
    m0, u0 = bf.lines(x0)
    m1, u1 = bf.lines(x1)
    lines = (OrientedLine(m0, u0), OrientedLine(m1, u1))
    dist = float(segment_distance(seg0[0], seg0[1], seg1[0], seg1[1]))
    s0 = float(bf._s0)
    pair = BendPair(s0 + (x0 - s0) % TWO_PI, s0 + (x1 - s0) % TWO_PI)
    return TPattern(
        bends=np.array([seg0, seg1]),
        residual_g=z.g,
        residual_h=z.h,
        min_distance=dist,
        source=pair,
        sphere=SpherePoint(z.theta, z.phi),
        winding=z.winding,
        certificate=cert,
        lines=lines,
    )


def find_t_patterns(strip, tol: float = 1e-10, config: SearchConfig | None = None) -> list[TPattern]:
    bf = strip if isinstance(strip, BendField) else BendField(strip)
    zeros, n_cells = certified_zeros(bf, tol, config, all_zeros=True)
    if not zeros:
        raise NotFound(f"no certified zero ({n_cells} cells with non-zero winding)")
    return [_pattern_from_zero(bf, z) for z in zeros]


def find_t_pattern(strip, tol: float = 1e-10, config: SearchConfig | None = None,
                   certify: bool = True) -> TPattern:
    """Certified T-pattern with ``|g|, |h| <= tol``; ties go to the smallest ``(theta, phi)``.

    Raises :class:`NotFound` when no cell certifies within ``max_depth``;
    that reflects the search resolution only.
    """
    cfg = config or SearchConfig()
    bf = strip if isinstance(strip, BendField) else BendField(strip)
    zeros, n_cells = certified_zeros(bf, tol, cfg, all_zeros=True)
    if not zeros:
        raise NotFound(f"no certified zero within depth {cfg.max_depth} ({n_cells} candidate cells)")
    z = zeros[0]
    cert = ()
    if certify:
        delta = (cfg.theta_range[1] - cfg.theta_range[0]) / cfg.n_theta
        step = delta
        (wa, tha), (wb, thb) = (meridian_winding(bf, z.theta - delta / 2, phi_lo=cfg.phi_lo, step=step),
                                meridian_winding(bf, z.theta + delta / 2, phi_lo=cfg.phi_lo, step=step))
        cert = (wa, wb)
    return _pattern_from_zero(bf, z, cert)


# ----------------------------------------------------------------------------
# line families (the dual-number lemma)

def check_line_family(lines, endpoint_tol: float = 1e-9, max_turn: float = 0.1):
    """Validate a sampled family: continuity and ``L(1) = L(0)`` reversed."""
    L0, L1 = lines[0], lines[-1]
    if np.linalg.norm(L1.direction + L0.direction) > endpoint_tol:
        raise EndpointError("last line must be the first one reversed")
    diff = L1.anchor - L0.anchor
    off = diff - (diff @ L0.direction) * L0.direction
    if np.linalg.norm(off) > endpoint_tol:
        raise EndpointError("last line must coincide with the first as a set")
    dirs = np.array([L.direction for L in lines])
    cosines = np.clip(np.einsum("ij,ij->i", dirs[:-1], dirs[1:]), -1, 1)
    turn = np.arccos(cosines)
    if np.any(turn >= max_turn):
        i = int(np.argmax(turn))
        raise ContinuityError(f"directions {i} and {i + 1} differ by {turn[i]:.3f} rad")


@dataclass
class TTResult:
    r: float
    s: float
    g: float
    h: float
    method: str
    winding: int = 0

    @property
    def residual(self) -> float:
        return max(abs(self.g), abs(self.h))


def _polish(field_, r, s, tol):
    from scipy.optimize import least_squares

    def fun(v):
        g, h = field_.F(v[0], v[1])
        return [float(g), float(h)]

    sol = least_squares(fun, [r, s], xtol=1e-15, ftol=1e-15, gtol=1e-15, method="lm")
    g, h = fun(sol.x)
    return float(sol.x[0]), float(sol.x[1]), g, h


def _normalize_rs(r, s):
    r, s = r % 1.0, s % 1.0
    if r > s:
        r, s = s, r
    return r, s


def lemma_tt_solve(path, tol: float = 1e-10, n_check: int = 1001, config: SearchConfig | None = None) -> TTResult:
    """Find ``r < s`` with the lines ``L_r``, ``L_s`` perpendicular and meeting.

    ``path`` is a callable ``t -> OrientedLine`` on ``[0, 1]`` or a sequence
    of OrientedLines sampled uniformly.  The lines are extended to all ``t``
    by ``L(t + 1) = L(t)`` reversed.
    """
    if callable(path) and not isinstance(path, (list, tuple)):
        ts = np.linspace(0.0, 1.0, n_check)
        lines = [path(float(t)) for t in ts]
        check_line_family(lines)
        field_ = FunctionLineField(path, getattr(path, "vectorized", None))
    else:
        lines = list(path)
        check_line_family(lines)
        ts = np.linspace(0.0, 1.0, len(lines))
        field_ = SampledLineField(ts, [L.anchor for L in lines], [L.direction for L in lines])
    cfg = config or SearchConfig(n_theta=96, n_phi=48, max_depth=48)
    try:
        zeros, _ = certified_zeros(field_, tol, cfg, all_zeros=False)
    except NotFound:
        zeros = []
    if zeros:
        z = zeros[0]
        r, s = (z.theta - z.phi) / TWO_PI, (z.theta + z.phi) / TWO_PI
        g, h = field_.F(r, s)
        rr, ss = _normalize_rs(r, s)
        return TTResult(rr, ss, float(g), float(h), "degree", z.winding)
    # degenerate zero sets (e.g. a planar pencil, where h vanishes identically)
    # have no isolated zero; take the best lattice node and polish it
    thetas = np.linspace(0, TWO_PI, 2 * cfg.n_theta + 1)
    phis = np.linspace(cfg.phi_lo, math.pi - cfg.phi_lo, 2 * cfg.n_phi + 1)
    T, P = np.meshgrid(thetas, phis, indexing="ij")
    g, h = field_.F_sphere(T, P)
    i, j = np.unravel_index(np.argmin(g * g + h * h), g.shape)
    r0, s0 = (T[i, j] - P[i, j]) / TWO_PI, (T[i, j] + P[i, j]) / TWO_PI
    r, s, g1, h1 = _polish(field_, r0, s0, tol)
    if max(abs(g1), abs(h1)) > tol:
        raise NotFound(f"best residual {max(abs(g1), abs(h1)):.3e} above tol")
    rr, ss = _normalize_rs(r, s)
    return TTResult(rr, ss, g1, h1, "residual")


def grid_oracle(field_, n: int = 1000):
    """Best ``(r, s, |F|)`` over an ``n x n`` grid of ``0 <= r < s <= 1``.

    Vectorised with the matrix forms ``G = U U^T`` and
    ``H_ij = b_i . u_j + u_i . b_j`` where ``b = m x u`` are the moments.
    """
    ts = (np.arange(n) + 0.5) / n
    m, u = field_.lines(ts)
    b = np.cross(m, u)
    G = u @ u.T
    H = b @ u.T + u @ b.T
    R2 = G * G + H * H
    iu = np.triu_indices(n, 1)
    k = int(np.argmin(R2[iu]))
    i, j = iu[0][k], iu[1][k]
    return float(ts[i]), float(ts[j]), float(math.sqrt(R2[i, j])), 1.0 / n


class LineFamily:
    """Smooth family ``t -> OrientedLine`` on ``[0, 1]`` with ``L(1) = L(0)`` reversed.

    Direction ``normalize(cos(pi t) d0 + sin(pi t) e(t))`` where ``e(t)`` is a
    unit vector orthogonal to ``d0`` turning by ``psi(t)``; anchor
    ``c + sin(pi t) (v0 + t v1) + a sin(pi t) n``.  With ``psi = 0`` and
    ``v0 = v1 = 0`` this is a rigid screw of pitch profile ``a sin(pi t)``
    about the common normal ``n = d0 x e``; ``a = 0`` gives a planar pencil.
    """

    def __init__(self, d0, e1, c=(0.0, 0.0, 0.0), a=0.0, psi=(0.0, 0.0), v0=(0.0, 0.0, 0.0), v1=(0.0, 0.0, 0.0)):
        d0 = np.asarray(d0, dtype=float)
        self.d0 = d0 / np.linalg.norm(d0)
        e1 = np.asarray(e1, dtype=float)
        e1 = e1 - (e1 @ self.d0) * self.d0
        self.e1 = e1 / np.linalg.norm(e1)
        self.e2 = np.cross(self.d0, self.e1)
        self.c = np.asarray(c, dtype=float)
        self.a = float(a)
        self.psi = tuple(float(v) for v in psi)
        self.v0 = np.asarray(v0, dtype=float)
        self.v1 = np.asarray(v1, dtype=float)

    @classmethod
    def random(cls, rng, kind: str = "generic") -> "LineFamily":
        d0 = rng.normal(size=3)
        e1 = rng.normal(size=3)
        c = rng.normal(size=3)
        if kind == "pencil":
            return cls(d0, e1, c)
        if kind == "screw":
            return cls(d0, e1, c, a=rng.uniform(0.2, 2.0) * rng.choice([-1, 1]))
        return cls(d0, e1, c, a=rng.uniform(-1, 1), psi=rng.uniform(-0.6, 0.6, size=2),
                   v0=0.3 * rng.normal(size=3), v1=0.3 * rng.normal(size=3))

    def vectorized(self, t):
        t = np.asarray(t, dtype=float)[..., None]
        ang = self.psi[0] * np.sin(np.pi * t) + self.psi[1] * np.sin(2 * np.pi * t)
        e = np.cos(ang) * self.e1 + np.sin(ang) * self.e2
        d = np.cos(np.pi * t) * self.d0 + np.sin(np.pi * t) * e
        d = d / np.linalg.norm(d, axis=-1, keepdims=True)
        sp = np.sin(np.pi * t)
        m = self.c + sp * (self.v0 + t * self.v1) + self.a * sp * self.e2
        return m, d

    def __call__(self, t: float) -> OrientedLine:
        m, d = self.vectorized(np.array(t))
        return OrientedLine(m, d)
