"""Flat Moebius bands, pre-bends and sampled ruled strips.

The flat band ``M_lam`` is the strip ``R x [0, 1]`` modulo the deck
transformation ``(x, y) -> (x + lam, 1 - y)``.  A pre-bend is a straight
segment from one boundary line to the other; in the universal cover we store
it as a *lift* whose endpoints have ``y = 0`` (bottom) and ``y = 1`` (top).
Its displacement is ``t = x_top - x_bottom`` and it is embedded in the
quotient exactly when ``|t| < lam``.

A :class:`RuledStrip` samples a bend foliation of an embedded band: for each
parameter ``s`` in ``[0, 2 pi)`` it holds a pre-bend (two flat points) and the
corresponding 3D bend (two space points), endpoint ``j`` of one mapping to
endpoint ``j`` of the other.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadEpsilon,
    DegenerateSegment,
    InvalidCut,
    NonDevelopable,
    NotEmbedded,
    OverlapError,
    StripFormatError,
    TooFewSamples,
)
from .fileio import atomic_write_text
from .segments import segment_distance, segments_cross_2d

BOUNDARY_TOL = 1e-9
MIN_SAMPLES = 8


@dataclass(frozen=True)
class FlatMoebius:
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"aspect ratio must be positive, got {self.lam}")


@dataclass(frozen=True)
class FlatPoint:
    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def deck(points, k, lam: float) -> np.ndarray:
    """Apply the ``k``-th power of the deck transformation to ``(..., 2)`` points."""
    p = np.array(points, dtype=float)
    k = np.asarray(k)
    odd = (k % 2) != 0
    p[..., 0] = p[..., 0] + k * lam
    p[..., 1] = np.where(odd, 1.0 - p[..., 1], p[..., 1])
    return p


def canonicalize(p: FlatPoint, band: FlatMoebius) -> FlatPoint:
    lam = band.lam
    k = math.floor(p.x / lam)
    x = p.x - k * lam
    y = p.y if k % 2 == 0 else 1.0 - p.y
    if x >= lam:  # rounding at the seam
        x, y = x - lam, 1.0 - y
    return FlatPoint(float(x), float(y))


def _on_boundary(y: float, tol: float = BOUNDARY_TOL) -> bool:
    return abs(y) <= tol or abs(y - 1.0) <= tol


def lift_segment(p, q, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Lift a pre-bend given by arbitrary representatives of its endpoints.

    ``p`` is kept; ``q`` is replaced by the deck image on the opposite
    boundary line that makes ``|t|`` minimal.  For embedded pre-bends that
    image is the unique one with ``|t| < lam``.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if not (_on_boundary(p[1]) and _on_boundary(q[1])):
        raise ValueError("pre-bend endpoints must lie on the boundary y in {0, 1}")
    same_side = round(p[1]) == round(q[1])
    # admissible shifts: odd when both stored on the same line, even otherwise
    base = 1 if same_side else 0
    k0 = base + 2 * round((p[0] - q[0] - base * lam) / (2 * lam))
    best = min((k0 - 2, k0, k0 + 2), key=lambda k: abs(q[0] + k * lam - p[0]))
    q2 = deck(q, best, lam)
    q2[1] = 1.0 - round(p[1])
    p2 = p.copy()
    p2[1] = float(round(p[1]))
    return p2, q2


@dataclass(frozen=True)
class PreBend:
    """A lifted pre-bend: ``bottom`` on ``y = 0`` and ``top`` on ``y = 1``."""

    bottom: FlatPoint
    top: FlatPoint

    def __post_init__(self):
        if abs(self.bottom.y) > BOUNDARY_TOL or abs(self.top.y - 1.0) > BOUNDARY_TOL:
            raise ValueError("PreBend needs bottom.y == 0 and top.y == 1")

    @classmethod
    def from_endpoints(cls, p, q, band: FlatMoebius) -> "PreBend":
        p = p.as_array() if isinstance(p, FlatPoint) else np.asarray(p, dtype=float)
        q = q.as_array() if isinstance(q, FlatPoint) else np.asarray(q, dtype=float)
        cp = canonicalize(FlatPoint(*p), band)
        cq = canonicalize(FlatPoint(*q), band)
        if abs(cp.x - cq.x) <= BOUNDARY_TOL and abs(cp.y - cq.y) <= BOUNDARY_TOL:
            raise DegenerateSegment("pre-bend endpoints coincide")
        a, b = lift_segment(p, q, band.lam)
        if a[1] > b[1]:
            a, b = b, a
        pb = cls(FlatPoint(*a), FlatPoint(*b))
        if abs(pb.t) >= band.lam:
            raise NotEmbedded(f"|t| = {abs(pb.t)} is not below lambda = {band.lam}")
        return pb

    @classmethod
    def vertical(cls, x: float, t: float = 0.0) -> "PreBend":
        """Pre-bend through ``(x, 1/2)`` with displacement ``t``."""
        return cls(FlatPoint(x - t / 2, 0.0), FlatPoint(x + t / 2, 1.0))

    @property
    def t(self) -> float:
        return self.top.x - self.bottom.x

    @property
    def length(self) -> float:
        return math.hypot(1.0, self.t)

    @property
    def crossing(self) -> float:
        """x coordinate where the lift meets the centerline ``y = 1/2``."""
        return 0.5 * (self.bottom.x + self.top.x)

    def as_array(self) -> np.ndarray:
        return np.array([[self.bottom.x, 0.0], [self.top.x, 1.0]])

    def shifted(self, k: int, lam: float) -> "PreBend":
        """Deck image ``k`` times over, re-sorted into bottom/top form."""
        a, b = deck(self.as_array(), k, lam)
        if a[1] > b[1]:
            a, b = b, a
        return PreBend(FlatPoint(*a), FlatPoint(*b))

    def canonical(self, band: FlatMoebius) -> "PreBend":
        """Deck image whose centerline crossing lies in ``[0, lam)``."""
        k = -math.floor(self.crossing / band.lam)
        pb = self.shifted(k, band.lam)
        if pb.crossing >= band.lam:
            pb = pb.shifted(-1, band.lam)
        return pb


def centerline_crossings(pb, band: FlatMoebius) -> int:
    """Number of points where the pre-bend meets the centerline in the quotient.

    ``pb`` is a :class:`PreBend` or a pair of boundary points.  Every deck
    image of the centerline is the line ``y = 1/2`` again, and the lift rises
    monotonically from ``y = 0`` to ``y = 1``, so the count is the number of
    roots of ``y(s) = 1/2`` on the lift.  A second crossing would need
    ``|t| >= lam``, i.e. length at least ``sqrt(1 + lam^2)``; such segments
    are rejected as not embedded.
    """
    if not isinstance(pb, PreBend):
        p, q = pb
        pb = PreBend.from_endpoints(p, q, band)
    if abs(pb.t) >= band.lam:
        raise NotEmbedded("pre-bend meets its own deck image")
    ys = np.array([pb.bottom.y, pb.top.y]) - 0.5
    return int(np.count_nonzero(np.diff(np.sign(ys))))


def _freeze(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RuledStrip:
    """Sampled bend foliation.

    ``s``: ``(N,)`` parameters in ``[0, 2 pi)``; ``pre``: ``(N, 2, 2)`` flat
    endpoints; ``bends``: ``(N, 2, 3)`` space endpoints.
    """

    lam: float
    s: np.ndarray
    pre: np.ndarray
    bends: np.ndarray

    def __post_init__(self):
        FlatMoebius(self.lam)
        s = _freeze(self.s)
        pre = _freeze(self.pre)
        bends = _freeze(self.bends)
        n = s.shape[0]
        if s.ndim != 1 or pre.shape != (n, 2, 2) or bends.shape != (n, 2, 3):
            raise ValueError("inconsistent strip array shapes")
        if not (np.all(np.isfinite(pre)) and np.all(np.isfinite(bends)) and np.all(np.isfinite(s))):
            raise ValueError("strip data must be finite")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "bends", bends)

    @property
    def n(self) -> int:
        return int(self.s.shape[0])

    @property
    def band(self) -> FlatMoebius:
        return FlatMoebius(self.lam)

    def bend_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.bends[:, 1] - self.bends[:, 0], axis=1)

    def lifted(self) -> "LiftedStrip":
        return lift_strip(self)

    def subsample(self, index) -> "RuledStrip":
        index = np.asarray(index)
        return RuledStrip(self.lam, self.s[index], self.pre[index], self.bends[index])

    def prebend(self, i: int) -> PreBend:
        return PreBend.from_endpoints(self.pre[i, 0], self.pre[i, 1], self.band)


@dataclass(frozen=True, eq=False)
class LiftedStrip:
    """Continuous lift of the pre-bends into the universal cover.

    ``flat[i]`` is ``[bottom, top]`` (y = 0 then y = 1), ``space[i]`` the
    matching 3D endpoints, ``crossing[i]`` the centerline crossing.  Crossings
    increase with ``i`` and the sample after the last is ``deck(flat[0])``.
    """

    lam: float
    flat: np.ndarray
    space: np.ndarray
    crossing: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return self.flat[:, 1, 0] - self.flat[:, 0, 0]

    def closed(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays with one extra row: the deck image of sample 0."""
        wrap = deck(self.flat[0], 1, self.lam)[::-1]
        flat = np.concatenate([self.flat, wrap[None]], axis=0)
        space = np.concatenate([self.space, self.space[0][::-1][None]], axis=0)
        return flat, space


def lift_strip(strip: RuledStrip) -> LiftedStrip:
    lam = strip.lam
    n = strip.n
    flat = np.empty((n, 2, 2))
    space = np.empty((n, 2, 3))
    crossing = np.empty(n)
    prev = None
    for i in range(n):
        a, b = lift_segment(strip.pre[i, 0], strip.pre[i, 1], lam)
        sa, sb = strip.bends[i, 0], strip.bends[i, 1]
        if a[1] > b[1]:
            a, b, sa, sb = b, a, sb, sa
        c = 0.5 * (a[0] + b[0])
        if prev is None:
            k = -math.floor(c / lam)
        else:
            k = round((prev - c) / lam)
        if k != 0:
            a, b = deck(np.stack([a, b]), k, lam)
            if k % 2:
                a, b, sa, sb = b, a, sb, sa
            c = 0.5 * (a[0] + b[0])
        flat[i] = [a, b]
        space[i] = [sa, sb]
        crossing[i] = c
        prev = c
    return LiftedStrip(lam, flat, space, crossing)


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    value: float


@dataclass
class ValidationReport:
    n_samples: int
    violations: list = field(default_factory=list)
    min_bend_distance: float = math.inf
    max_length_error: float = 0.0
    boundary_length: float = math.nan
    boundary_expected: float = math.nan

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, kind: str) -> int:
        return sum(1 for v in self.violations if v.kind == kind)

    def summary(self) -> str:
        kinds = sorted({v.kind for v in self.violations})
        tail = ", ".join(f"{k}={self.count(k)}" for k in kinds) or "none"
        return (
            f"samples={self.n_samples} violations: {tail}; "
            f"min_bend_distance={self.min_bend_distance:.3e} max_length_error={self.max_length_error:.3e}"
        )


def _pairwise_min(p0, p1, q0, q1, block: int = 256) -> np.ndarray:
    n, m = p0.shape[0], q0.shape[0]
    out = np.empty((n, m))
    for i in range(0, n, block):
        sl = slice(i, i + block)
        out[sl] = segment_distance(p0[sl, None], p1[sl, None], q0[None], q1[None])
    return out


def validate_foliation(
    strip: RuledStrip,
    iso_tol: float = 1e-6,
    disjoint_tol: float = 1e-9,
    boundary_tol: float = 1e-4,
    max_listed: int = 50,
) -> ValidationReport:
    """Check a sampled strip against the defining properties of a bend foliation.

    Violation kinds: ``order`` (parameters or crossings not increasing once
    around), ``isometry`` (bend and pre-bend lengths differ), ``intersection``
    (non-adjacent bends closer than ``disjoint_tol``), ``overlap`` (pre-bends
    meet in the flat quotient), ``boundary`` (summed boundary polyline differs
    from ``2 lam``) and ``continuity`` (a space jump exceeds the flat jump).
    """
    n = strip.n
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {n}")
    rep = ValidationReport(n_samples=n)
    add = rep.violations.append
    lam = strip.lam

    s = strip.s
    if s[0] < 0 or s[-1] >= 2 * np.pi or np.any(np.diff(s) <= 0):
        add(Violation("order", ("s",), float(np.min(np.diff(s))) if n > 1 else 0.0))

    lifted = lift_strip(strip)
    steps = np.diff(np.append(lifted.crossing, lifted.crossing[0] + lam))
    if np.any(steps <= 0):
        add(Violation("order", ("crossing", int(np.argmin(steps))), float(steps.min())))

    flen = np.hypot(1.0, lifted.t)
    err = np.abs(strip.bend_lengths() - flen)
    rep.max_length_error = float(err.max())
    for i in np.flatnonzero(err > iso_tol)[:max_listed]:
        add(Violation("isometry", (int(i),), float(err[i])))
    for i in np.flatnonzero(np.abs(lifted.t) >= lam)[:max_listed]:
        add(Violation("overlap", (int(i), int(i)), float(lifted.t[i])))

    b0, b1 = lifted.space[:, 0], lifted.space[:, 1]
    dist = _pairwise_min(b0, b1, b0, b1)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    gap = np.minimum(gap, n - gap)
    far = gap >= 2
    masked = np.where(far, dist, np.inf)
    rep.min_bend_distance = float(masked.min()) if np.any(far) else math.inf
    bad = np.argwhere(np.triu(far & (dist <= disjoint_tol)))
    for i, j in bad[:max_listed]:
        add(Violation("intersection", (int(i), int(j)), float(dist[i, j])))

    f0, f1 = lifted.flat[:, 0], lifted.flat[:, 1]
    listed = 0
    for k in (-2, -1, 0, 1, 2):
        g0, g1 = deck(f0, k, lam), deck(f1, k, lam)
        hit = segments_cross_2d(f0[:, None], f1[:, None], g0[None], g1[None], tol=disjoint_tol)
        if k == 0:
            hit &= ~np.eye(n, dtype=bool)
            hit = np.triu(hit)
        for i, j in np.argwhere(hit):
            if listed >= max_listed:
                break
            add(Violation("overlap", (int(i), int(j)), float(k)))
            listed += 1

    flat, space = lifted.closed()
    flat_len = np.sum(np.linalg.norm(np.diff(flat, axis=0), axis=2))
    space_jump = np.linalg.norm(np.diff(space, axis=0), axis=2)
    flat_jump = np.linalg.norm(np.diff(flat, axis=0), axis=2)
    rep.boundary_length = float(np.sum(space_jump))
    rep.boundary_expected = 2 * lam
    if abs(rep.boundary_length - 2 * lam) > boundary_tol or abs(flat_len - 2 * lam) > boundary_tol:
        add(Violation("boundary", (), rep.boundary_length - 2 * lam))
    for i, j in np.argwhere(space_jump > flat_jump + iso_tol)[:max_listed]:
        add(Violation("continuity", (int(i), int(j)), float(space_jump[i, j] - flat_jump[i, j])))
    return rep


def interpolate_flat_region(pb0: PreBend, pb1: PreBend, n: int, band: FlatMoebius | None = None) -> list[PreBend]:
    """``n`` pre-bends whose endpoints interpolate linearly between two disjoint pre-bends.

    When ``band`` is given, ``pb1`` is first replaced by the deck image whose
    crossing is nearest to that of ``pb0``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if band is not None:
        k = round((pb0.crossing - pb1.crossing) / band.lam)
        pb1 = pb1.shifted(k, band.lam)
    a, b = pb0.as_array(), pb1.as_array()
    if segments_cross_2d(a[0], a[1], b[0], b[1], tol=BOUNDARY_TOL):
        raise OverlapError("pre-bends to interpolate must be disjoint")
    out = []
    for j in range(1, n + 1):
        w = j / (n + 1)
        p = (1 - w) * a + w * b
        out.append(PreBend(FlatPoint(p[0, 0], 0.0), FlatPoint(p[1, 0], 1.0)))
    return out


@dataclass(frozen=True)
class Trapezoid:
    """Result of cutting the flat band along a pre-bend ``T``.

    Coordinates: long side ``D`` on ``y = 0`` from ``-(lam+t)/2`` to
    ``(lam+t)/2``; short side ``H`` on ``y = 1`` from ``-(lam-t)/2`` to
    ``(lam-t)/2``; ``u = (0, 0)`` and ``v = (0, 1)`` are their midpoints.
    ``t >= 0`` always; ``reflected`` records whether ``x -> -x`` was applied.
    """

    lam: float
    t: float
    b: float = math.nan
    reflected: bool = False
    x_offset: float = 0.0

    @property
    def D(self) -> tuple[np.ndarray, np.ndarray]:
        w = (self.lam + self.t) / 2
        return np.array([-w, 0.0]), np.array([w, 0.0])

    @property
    def H(self) -> tuple[np.ndarray, np.ndarray]:
        w = (self.lam - self.t) / 2
        return np.array([-w, 1.0]), np.array([w, 1.0])

    @property
    def u(self) -> np.ndarray:
        return np.array([0.0, 0.0])

    @property
    def v(self) -> np.ndarray:
        return np.array([0.0, 1.0])

    @property
    def len_D(self) -> float:
        return self.lam + self.t

    @property
    def len_H(self) -> float:
        return self.lam - self.t

    @property
    def len_D1(self) -> float:
        return self.len_D / 2

    @property
    def len_D2(self) -> float:
        return self.len_D / 2

    @property
    def len_H1(self) -> float:
        return self.len_H / 2

    @property
    def len_H2(self) -> float:
        return self.len_H / 2

    @property
    def slant(self) -> float:
        return math.hypot(1.0, self.t)

    def vertices(self) -> np.ndarray:
        """Counter-clockwise: D left, D right, H right, H left."""
        d0, d1 = self.D
        h0, h1 = self.H
        return np.array([d0, d1, h1, h0])

    def from_cover(self, pts) -> np.ndarray:
        """Map lifted flat points (``(..., 2)``) into trapezoid coordinates.

        Each point is moved by a power of the deck transformation into the
        fundamental domain bounded by ``T`` and its deck image.
        """
        p = np.array(pts, dtype=float)
        if self.reflected:
            p[..., 0] = -p[..., 0]
        p[..., 0] -= self.x_offset
        lam, t = self.lam, self.t
        # left edge: x = t*y - (lam+t)/2 ; width lam + t - 2 t y
        for _ in range(4):
            left = t * p[..., 1] - (lam + t) / 2
            right = left + lam + t - 2 * t * p[..., 1]
            below = p[..., 0] < left - 1e-12
            above = p[..., 0] > right + 1e-12
            if not (np.any(below) or np.any(above)):
                break
            k = np.where(below, 1, np.where(above, -1, 0))
            moved = deck(p, k, lam)
            # in trapezoid coordinates the deck map carries the centre along
            p = np.where((k != 0)[..., None], moved, p)
        return p

    def to_cover(self, pts) -> np.ndarray:
        p = np.array(pts, dtype=float)
        p[..., 0] += self.x_offset
        if self.reflected:
            p[..., 0] = -p[..., 0]
        return p


def cut_along(band: FlatMoebius, T: PreBend, B: PreBend | None = None) -> Trapezoid:
    """Cut ``M_lam`` along ``T``; signs are normalised so that ``t >= 0``.

    When ``B`` is given its displacement in the normalised picture is stored
    as ``b``.
    """
    lam = band.lam
    t = T.t
    if not math.isfinite(t) or abs(t) >= lam:
        raise InvalidCut(f"|t| = {abs(t)} must be below lambda = {lam}")
    reflected = t < 0
    xb = -T.bottom.x if reflected else T.bottom.x
    tt = abs(t)
    # trapezoid x = cover x - xb - (lam + t)/2, after optional reflection
    offset = xb + (lam + tt) / 2
    b = math.nan
    if B is not None:
        b = -B.t if reflected else B.t
    return Trapezoid(lam=lam, t=tt, b=b, reflected=reflected, x_offset=offset)


def trim(strip: RuledStrip, eps: float) -> RuledStrip:
    """Restrict every bend to flat ``y in (eps, 1 - eps)`` and rescale by ``1/(1 - 2 eps)``."""
    if not (0.0 <= eps < 0.5) or not math.isfinite(eps):
        raise BadEpsilon(f"eps must lie in [0, 1/2), got {eps}")
    if eps == 0.0:
        return RuledStrip(strip.lam, strip.s.copy(), strip.pre.copy(), strip.bends.copy())
    scale = 1.0 / (1.0 - 2.0 * eps)
    pre = np.array(strip.pre)
    bends = np.array(strip.bends)
    new_pre = np.empty_like(pre)
    new_bends = np.empty_like(bends)
    for i in range(strip.n):
        a, b = lift_segment(pre[i, 0], pre[i, 1], strip.lam)
        for j, (src, dst) in enumerate(((a, b), (b, a))):
            # point on the segment at flat height eps from src's side
            target = eps if src[1] < 0.5 else 1.0 - eps
            w = (target - src[1]) / (dst[1] - src[1])
            q = src + w * (dst - src)
            x3 = bends[i, j] + w * (bends[i, 1 - j] - bends[i, j])
            new_pre[i, j] = [q[0] * scale, (q[1] - eps) * scale]
            new_bends[i, j] = x3 * scale
    new_pre[:, :, 1] = np.round(new_pre[:, :, 1])
    return RuledStrip(strip.lam * scale, strip.s.copy(), new_pre, new_bends)


@dataclass(frozen=True, eq=False)
class Development:
    """Planar layout of a strip: ``points[i]`` holds the placed ``[bottom, top]``."""

    points: np.ndarray
    max_quad_error: float
    round_trip_error: float


def _circle_point(p, q, rp, rq, side):
    d = q - p
    L = np.linalg.norm(d)
    if L == 0.0:
        raise NonDevelopable("coincident reference points")
    e = d / L
    n = np.array([-e[1], e[0]])
    a = (rp * rp - rq * rq + L * L) / (2 * L)
    h2 = rp * rp - a * a
    h = math.sqrt(max(h2, 0.0))
    return p + a * e + side * h * n, h2


def develop(strip: RuledStrip, iso_tol: float = 1e-6, align: bool = True) -> Development:
    """Unfold consecutive bend quadrilaterals into the plane.

    Each new bend's endpoints are placed from their space distances to the
    previous bend's endpoints; the remaining edge length is the consistency
    check.  The side of each placement follows the stored flat orientation.
    """
    lifted = lift_strip(strip)
    flat, space = lifted.flat, lifted.space
    n = strip.n
    out = np.empty((n, 2, 2))
    out[0] = flat[0]
    worst = 0.0
    for i in range(n - 1):
        P, Q = out[i]
        A, B = space[i]
        fP, fQ = flat[i]
        for j in range(2):
            X = space[i + 1, j]
            fx = flat[i + 1, j]
            orient = (fQ[0] - fP[0]) * (fx[1] - fP[1]) - (fQ[1] - fP[1]) * (fx[0] - fP[0])
            side = 1.0 if orient >= 0 else -1.0
            rp, rq = np.linalg.norm(X - A), np.linalg.norm(X - B)
            pt, h2 = _circle_point(P, Q, rp, rq, side)
            if h2 < -(iso_tol * max(rp, rq, 1.0)) * 2:
                raise NonDevelopable(f"triangle inequality fails at sample {i + 1}")
            out[i + 1, j] = pt
        placed = np.linalg.norm(out[i + 1, 1] - out[i + 1, 0])
        err = abs(placed - np.linalg.norm(space[i + 1, 1] - space[i + 1, 0]))
        worst = max(worst, err)
        if err > iso_tol:
            raise NonDevelopable(f"quadrilateral {i}->{i + 1} inconsistent by {err:.3e}")
    target = flat.reshape(-1, 2)
    got = out.reshape(-1, 2)
    if align:
        from .constructions import align_rigid

        motion = align_rigid(got, target, allow_reflection=False)
        got = motion.apply(got)
        out = got.reshape(n, 2, 2)
    rt = float(np.max(np.linalg.norm(got - target, axis=1)))
    if rt > 10 * iso_tol:
        raise NonDevelopable(f"round trip error {rt:.3e} exceeds {10 * iso_tol:.1e}")
    return Development(out, worst, rt)


def strip_to_dict(strip: RuledStrip) -> dict:
    return {
        "lambda": float(strip.lam),
        "samples": [
            {
                "s": float(strip.s[i]),
                "pre_bend": [[float(v) for v in p] for p in strip.pre[i]],
                "bend": [[float(v) for v in p] for p in strip.bends[i]],
            }
            for i in range(strip.n)
        ],
    }


def strip_from_dict(doc) -> RuledStrip:
    try:
        lam = float(doc["lambda"])
        samples = doc["samples"]
        s = np.array([float(x["s"]) for x in samples])
        pre = np.array([x["pre_bend"] for x in samples], dtype=float).reshape(len(samples), 2, 2)
        bends = np.array([x["bend"] for x in samples], dtype=float).reshape(len(samples), 2, 3)
        return RuledStrip(lam, s, pre, bends)
    except (KeyError, TypeError, ValueError) as exc:
        raise StripFormatError(f"malformed strip document: {exc}") from exc


def dumps_strip(strip: RuledStrip) -> str:
    # json writes floats with repr, the shortest round-tripping form
    return json.dumps(strip_to_dict(strip), indent=1)


def loads_strip(text: str) -> RuledStrip:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StripFormatError(f"invalid JSON: {exc}") from exc
    return strip_from_dict(doc)


def save_strip(strip: RuledStrip, path) -> None:
    atomic_write_text(Path(path), dumps_strip(strip) + "\n")


def load_strip(path) -> RuledStrip:
    return loads_strip(Path(path).read_text(encoding="utf-8"))
