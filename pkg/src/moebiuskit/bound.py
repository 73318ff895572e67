"""Aspect-ratio lower bound from a single T-pattern.

Cutting along the top bar ``T`` of a T-pattern with displacement ``t`` gives
two competing lower bounds for ``2 lam``:

    alpha(t) = sqrt(1 + t^2) + sqrt(5 + t^2)      (increasing for t > 0)
    beta(t)  = 2 sqrt(5 + t^2) - 2 t              (decreasing on R)

They cross at ``t0 = 1/sqrt(3)`` where both equal ``2 sqrt(3)``, so
``max(alpha, beta) / 2 >= sqrt(3)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadBracket, HeightTooSmall, InconsistentInput
from .strip_model import Trapezoid

T0 = 1.0 / math.sqrt(3.0)
SQRT3 = math.sqrt(3.0)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TriangleInstance:
    """Triangle with base ``[(0,0), (base,0)]`` and apex ``(apex_offset, height)``."""

    base: float
    height: float
    apex_offset: float

    def __post_init__(self):
        if not self.base > 0:
            raise ValueError("base must be positive")
        if not self.height >= 1:
            raise HeightTooSmall(f"height {self.height} < 1")

    @classmethod
    def from_t(cls, t: float, height: float, apex_offset: float | None = None) -> "TriangleInstance":
        base = math.hypot(1.0, t)
        return cls(base, height, base / 2 if apex_offset is None else apex_offset)


def vee_length(tri: TriangleInstance) -> float:
    """Sum of the two sides meeting at the apex."""
    return math.hypot(tri.apex_offset, tri.height) + math.hypot(tri.base - tri.apex_offset, tri.height)


def vee_reflection_bound(tri: TriangleInstance) -> float:
    """``sqrt(base^2 + 4 h^2)``: distance from one base end to the mirror of the other."""
    return math.sqrt(tri.base**2 + 4 * tri.height**2)


def vee_lower_bound(t: float, h: float = 1.0) -> float:
    if h < 1:
        raise HeightTooSmall(f"height {h} < 1")
    return math.sqrt(5.0 + t * t)


def alpha(t):
    t = np.asarray(t, dtype=float)
    out = np.sqrt(1.0 + t * t) + np.sqrt(5.0 + t * t)
    return float(out) if out.ndim == 0 else out


def beta(t):
    t = np.asarray(t, dtype=float)
    out = 2.0 * np.sqrt(5.0 + t * t) - 2.0 * t
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BoundReport:
    t: float
    alpha: float
    beta: float
    lower_bound: float
    active_branch: str  # "alpha", "beta" or "both"


def lower_bound(t: float, tie_tol: float = 1e-12) -> BoundReport:
    a, b = alpha(t), beta(t)
    if abs(a - b) <= tie_tol * max(a, b):
        branch = "both"
    else:
        branch = "alpha" if a > b else "beta"
    return BoundReport(float(t), a, b, max(a, b) / 2.0, branch)


def lower_bound_value(t: float) -> float:
    return max(alpha(t), beta(t)) / 2.0


def golden_section(f, lo: float, hi: float, xtol: float = 0.0, max_iter: int = 500):
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x), iterations)``.

    With ``xtol = 0`` the bracket shrinks until it stops changing in floating
    point, which for a kinked minimum leaves an error of a few ulps.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while it < max_iter:
        it += 1
        width = b - a
        if width <= max(xtol, 4 * np.finfo(float).eps * max(abs(a), abs(b), 1e-300)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        if not (a <= c <= d <= b):
            break
    cands = [(fc, c), (fd, d), (f(a), a), (f(b), b)]
    fx, x = min(cands)
    return x, fx, it


def minimize_bound(t_min: float = 0.0, t_max: float = 2.0, tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section minimum of ``max(alpha, beta)/2`` over ``[t_min, t_max]``."""
    if not (math.isfinite(t_min) and math.isfinite(t_max)) or t_min >= t_max:
        raise BadBracket(f"need finite t_min < t_max, got [{t_min}, {t_max}]")
    if tol <= 0:
        raise BadBracket("tol must be positive")
    x, fx, _ = golden_section(lower_bound_value, t_min, t_max, xtol=0.0)
    return x, fx


@dataclass
class LengthReport:
    """Slack in each relation between flat and embedded lengths.

    Equalities report a signed difference that should vanish; inequalities
    report ``larger - smaller`` which should be non-negative.
    """

    equalities: dict = field(default_factory=dict)
    inequalities: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def total_slack(self) -> float:
        return sum(abs(v) for v in self.equalities.values()) + sum(self.inequalities.values())


def check_length_identities(
    trap: Trapezoid,
    embedded_lengths: dict,
    height: float | None = None,
    tol: float = 1e-6,
    flat_tol: float = 1e-9,
) -> LengthReport:
    """Compare measured space lengths ``H'``, ``D'``, ``T'``, ``B'`` with the trapezoid.

    ``height`` (optional) is the measured height of the triangle spanned by
    ``T'`` and the far point of ``B'``; only its slack over ``B'`` is recorded.
    """
    lam, t = trap.lam, trap.t
    flat1 = trap.len_H + trap.len_D - 2 * lam
    flat2 = trap.len_D - 2 * t - trap.len_H
    if abs(flat1) > flat_tol * max(1.0, lam) or abs(flat2) > flat_tol * max(1.0, lam):
        raise InconsistentInput(f"trapezoid identities fail: {flat1:.3e}, {flat2:.3e}")
    try:
        Hp, Dp, Tp, Bp = (float(embedded_lengths[k]) for k in ("H'", "D'", "T'", "B'"))
    except KeyError as exc:
        raise InconsistentInput(f"missing embedded length {exc}") from exc
    if min(Hp, Dp, Tp, Bp) <= 0:
        raise InconsistentInput("embedded lengths must be positive")

    rep = LengthReport()
    rep.equalities["H+D-2lam"] = flat1
    rep.equalities["D-2t-H"] = flat2
    rep.equalities["T'-sqrt(1+t^2)"] = Tp - math.hypot(1.0, t)
    rep.equalities["H'-H"] = Hp - trap.len_H
    rep.equalities["D'-D"] = Dp - trap.len_D
    rep.inequalities["H'-T'"] = Hp - Tp
    rep.inequalities["D'-sqrt(5+t^2)"] = Dp - math.sqrt(5.0 + t * t)
    rep.inequalities["B'-1"] = Bp - 1.0
    if height is not None:
        rep.inequalities["height-B'"] = float(height) - Bp
    for k, v in rep.equalities.items():
        if abs(v) > tol:
            rep.violations.append(k)
    for k, v in rep.inequalities.items():
        if v < -tol:
            rep.violations.append(k)
    return rep


def crossing_point(lo: float = -10.0, hi: float = 10.0, n: int = 200001):
    """Locate sign changes of ``alpha - beta`` on a grid, refined by bisection."""
    ts = np.linspace(lo, hi, n)
    d = alpha(ts) - beta(ts)
    idx = np.flatnonzero(np.sign(d[:-1]) != np.sign(d[1:]))
    roots = []
    for i in idx:
        a, b = ts[i], ts[i + 1]
        fa = alpha(a) - beta(a)
        for _ in range(200):
            m = 0.5 * (a + b)
            if m in (a, b):
                break
            fm = alpha(m) - beta(m)
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    return roots
