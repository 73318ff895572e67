"""Oriented lines in 3-space and the dual-number (Study sphere) picture.

A line is stored as an anchor point plus a unit direction.  Two oriented
lines have a pair of invariants

    g = u0 . u1
    h = (m0 - m1) . (u0 x u1)

where ``m0, m1`` are any points on the lines.  ``h`` does not depend on the
choice of points, and ``g = h = 0`` with non-parallel directions happens
exactly when the lines are perpendicular and meet.  The same pair appears as
the real and dual parts of the dual dot product of the Study coordinates
``u + eps (m x u)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


def vec3(x, y=None, z=None) -> np.ndarray:
    """Build a float vector of length 3 from three scalars or one sequence."""
    if y is None and z is None:
        v = np.asarray(x, dtype=float).reshape(3)
    else:
        v = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector {v}")
    return v


@dataclass(frozen=True, eq=False)
class OrientedLine:
    anchor: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        anchor = vec3(self.anchor)
        d = vec3(self.direction)
        norm = np.linalg.norm(d)
        if norm == 0.0:
            raise ValueError("direction must be non-zero")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "direction", d / norm)

    def reversed(self) -> "OrientedLine":
        return OrientedLine(self.anchor, -self.direction)

    def point(self, s: float) -> np.ndarray:
        return self.anchor + s * self.direction

    def reanchored(self, s: float) -> "OrientedLine":
        """Same oriented line, anchored at ``anchor + s * direction``."""
        return OrientedLine(self.point(s), self.direction)


@dataclass(frozen=True)
class DualNumber:
    """``real + eps * dual`` with ``eps**2 == 0``."""

    real: float
    dual: float = 0.0

    def _coerce(self, other) -> "DualNumber":
        if isinstance(other, DualNumber):
            return other
        return DualNumber(float(other), 0.0)

    def __add__(self, other):
        o = self._coerce(other)
        return DualNumber(self.real + o.real, self.dual + o.dual)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return DualNumber(self.real - o.real, self.dual - o.dual)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return DualNumber(-self.real, -self.dual)

    def __mul__(self, other):
        o = self._coerce(other)
        return DualNumber(self.real * o.real, self.real * o.dual + self.dual * o.real)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.real == 0.0:
            raise ZeroDivisionError("dual number with zero real part is not invertible")
        return DualNumber(self.real / o.real, (self.dual * o.real - self.real * o.dual) / o.real**2)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        o = self._coerce(other)
        return abs(self.real - o.real) <= tol and abs(self.dual - o.dual) <= tol


@dataclass(frozen=True, eq=False)
class DualVector:
    real_part: np.ndarray
    dual_part: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "real_part", vec3(self.real_part))
        object.__setattr__(self, "dual_part", vec3(self.dual_part))

    def dot(self, other: "DualVector") -> DualNumber:
        return dual_dot(self, other)

    def on_study_sphere(self, tol: float = 1e-12) -> bool:
        return self.dot(self).isclose(DualNumber(1.0, 0.0), tol)


def line_invariants(L0: OrientedLine, L1: OrientedLine) -> tuple[float, float]:
    """Return ``(g, h)`` for a pair of oriented lines.

    ``g`` is the cosine of the angle between the directions.  ``h`` is
    ``(m0 - m1) . (u0 x u1)`` with ``m_j`` the anchors; it equals the signed
    distance between the lines times the sine of their angle.
    """
    u0, u1 = L0.direction, L1.direction
    g = float(np.clip(u0 @ u1, -1.0, 1.0))
    h = float((L0.anchor - L1.anchor) @ np.cross(u0, u1))
    return g, h


def pair_invariants(u0, m0, u1, m1) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(g, h)`` over stacked directions and points (..., 3)."""
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    g = np.einsum("...i,...i->...", u0, u1)
    h = np.einsum("...i,...i->...", np.asarray(m0) - np.asarray(m1), np.cross(u0, u1))
    return g, h


def line_distance(L0: OrientedLine, L1: OrientedLine, parallel_tol: float = DEFAULT_TOL) -> float:
    """Minimal distance between the two (infinite) lines."""
    cross = np.cross(L0.direction, L1.direction)
    sin = np.linalg.norm(cross)
    if sin > parallel_tol:
        _, h = line_invariants(L0, L1)
        return abs(h) / sin
    diff = L1.anchor - L0.anchor
    return float(np.linalg.norm(diff - (diff @ L0.direction) * L0.direction))


def is_perpendicular_intersecting(L0: OrientedLine, L1: OrientedLine, tol: float = DEFAULT_TOL) -> bool:
    """True when the lines are non-parallel and both |g| and |h| are within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if np.linalg.norm(np.cross(L0.direction, L1.direction)) <= tol:
        return False
    g, h = line_invariants(L0, L1)
    return abs(g) <= tol and abs(h) <= tol


def to_study(L: OrientedLine) -> DualVector:
    """Study coordinates ``u + eps * (p x u)``; the moment is anchor independent."""
    return DualVector(L.direction, np.cross(L.anchor, L.direction))


def dual_dot(xi: DualVector, eta: DualVector) -> DualNumber:
    a, b = xi.real_part, xi.dual_part
    c, d = eta.real_part, eta.dual_part
    return DualNumber(float(a @ c), float(a @ d + b @ c))


def from_study(xi: DualVector) -> OrientedLine:
    """Inverse of :func:`to_study`; anchors at the point closest to the origin."""
    a = xi.real_part / np.linalg.norm(xi.real_part)
    return OrientedLine(np.cross(a, xi.dual_part), a)
