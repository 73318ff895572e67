"""Closest-point queries between line segments, vectorised with numpy.

All routines broadcast over leading axes, so ``segment_distance`` on
``(n, 1, 3)`` against ``(1, m, 3)`` inputs returns an ``(n, m)`` table.
"""
from __future__ import annotations

import numpy as np

_EPS = 1e-300


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def closest_params(p0, p1, q0, q1):
    """Parameters ``(s, t)`` in [0, 1] of the closest points of two segments.

    Segments are ``p0 + s (p1 - p0)`` and ``q0 + t (q1 - q0)``.  Degenerate
    (zero length) segments are handled as points.
    """
    p0, p1, q0, q1 = (np.asarray(v, dtype=float) for v in (p0, p1, q0, q1))
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = _dot(d1, d1)
    e = _dot(d2, d2)
    f = _dot(d2, r)
    c = _dot(d1, r)
    b = _dot(d1, d2)
    a, e, f, c, b = np.broadcast_arrays(a, e, f, c, b)

    denom = a * e - b * b
    # relative test: near-parallel segments fall back to s = 0 then clamp
    parallel = denom <= 1e-14 * np.maximum(a * e, _EPS)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(parallel, 0.0, np.clip((b * f - c * e) / np.where(parallel, 1.0, denom), 0.0, 1.0))
        t = np.where(e > _EPS, (b * s + f) / np.where(e > _EPS, e, 1.0), 0.0)
        s_lo = np.where(a > _EPS, np.clip(-c / np.where(a > _EPS, a, 1.0), 0.0, 1.0), 0.0)
        s_hi = np.where(a > _EPS, np.clip((b - c) / np.where(a > _EPS, a, 1.0), 0.0, 1.0), 0.0)
    s = np.where(t < 0.0, s_lo, np.where(t > 1.0, s_hi, s))
    t = np.clip(t, 0.0, 1.0)
    point_q = e <= _EPS
    s = np.where(point_q, s_lo, s)
    t = np.where(point_q, 0.0, t)
    return s, t


def segment_distance(p0, p1, q0, q1) -> np.ndarray:
    """Minimal Euclidean distance between segments ``[p0, p1]`` and ``[q0, q1]``."""
    p0, p1, q0, q1 = (np.asarray(v, dtype=float) for v in (p0, p1, q0, q1))
    s, t = closest_params(p0, p1, q0, q1)
    cp = p0 + s[..., None] * (p1 - p0)
    cq = q0 + t[..., None] * (q1 - q0)
    return np.linalg.norm(cp - cq, axis=-1)


def point_segment_distance(x, p0, p1) -> np.ndarray:
    x, p0, p1 = (np.asarray(v, dtype=float) for v in (x, p0, p1))
    d = p1 - p0
    dd = _dot(d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(dd > _EPS, np.clip(_dot(x - p0, d) / np.where(dd > _EPS, dd, 1.0), 0.0, 1.0), 0.0)
    return np.linalg.norm(x - (p0 + s[..., None] * d), axis=-1)


def _orient2d(a, b, c):
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])


def segments_cross_2d(p0, p1, q0, q1, tol: float = 0.0) -> np.ndarray:
    """True where two planar segments share a point (touching counts).

    ``tol`` widens the test: segments closer than ``tol`` are reported too.
    """
    p0, p1, q0, q1 = (np.asarray(v, dtype=float) for v in (p0, p1, q0, q1))
    o1 = _orient2d(p0, p1, q0)
    o2 = _orient2d(p0, p1, q1)
    o3 = _orient2d(q0, q1, p0)
    o4 = _orient2d(q0, q1, p1)
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    pad = lambda v: np.concatenate([v, np.zeros(v.shape[:-1] + (1,))], axis=-1)  # noqa: E731
    close = segment_distance(pad(p0), pad(p1), pad(q0), pad(q1)) <= tol
    return proper | close


def hausdorff_segments(p0, p1, q0, q1) -> np.ndarray:
    """Hausdorff distance between two segments (attained at endpoints)."""
    a = np.maximum(point_segment_distance(p0, q0, q1), point_segment_distance(p1, q0, q1))
    b = np.maximum(point_segment_distance(q0, p0, p1), point_segment_distance(q1, p0, p1))
    return np.maximum(a, b)
