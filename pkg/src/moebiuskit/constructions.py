"""The triangular Moebius band and a family of smooth embedded approximants.

The triangular band has aspect ratio sqrt(3).  Cut open along its top bar it
is the trapezoid with long side 4/sqrt(3) and short side 2/sqrt(3), which
splits into three equilateral triangles of side 2/sqrt(3); each is moved
rigidly onto the same equilateral triangle ``PQA`` in the plane ``z = 0``.

The smooth family replaces the three folds by half-cylinders.  Folds at the
two lower corners become cylinders of radius ``R`` ruled at 60 and 120
degrees; the fold along the top bar becomes a cylinder of radius ``2 R``.
With ``R = eps / 40`` the layout closes up exactly when

    lam = sqrt(3) + 4 sqrt(3) pi R,

and every piece is an exact isometric image of its flat preimage, so the
sampled strip is exactly developable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadEpsilon, DegenerateConfiguration
from .fileio import atomic_write_text
from .segments import hausdorff_segments
from .strip_model import (
    FlatMoebius,
    FlatPoint,
    PreBend,
    RuledStrip,
    canonicalize,
    cut_along,
    lift_strip,
)

S3 = math.sqrt(3.0)
LAMBDA_TRIANGULAR = S3
SIDE = 2.0 / S3


# ----------------------------------------------------------------------------
# rigid motions

@dataclass(frozen=True, eq=False)
class RigidMotion:
    """``x -> rotation @ x + translation``; ``rotation`` may have det -1."""

    rotation: np.ndarray
    translation: np.ndarray
    residual: float = 0.0
    max_error: float = 0.0

    def apply(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return pts @ self.rotation.T + self.translation

    @property
    def proper(self) -> bool:
        return bool(np.linalg.det(self.rotation) > 0)


def align_rigid(A, B, allow_reflection: bool = False, rank_tol: float = 1e-10) -> RigidMotion:
    """Least-squares rigid motion carrying point set ``A`` onto ``B`` (Kabsch).

    ``residual`` is the RMS distance after alignment, ``max_error`` the
    largest pointwise distance.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] < 3:
        raise DegenerateConfiguration("need two equally shaped sets of at least 3 points")
    ca, cb = A.mean(axis=0), B.mean(axis=0)
    A0, B0 = A - ca, B - cb
    sv = np.linalg.svd(A0, compute_uv=False)
    if sv.size < 2 or sv[1] <= rank_tol * max(sv[0], 1e-300):
        raise DegenerateConfiguration("points are collinear")
    U, _, Vt = np.linalg.svd(A0.T @ B0)
    d = np.ones(A.shape[1])
    if not allow_reflection and np.linalg.det(U @ Vt) < 0:
        d[-1] = -1.0
    Rm = (U * d) @ Vt
    Rm = Rm.T
    t = cb - Rm @ ca
    moved = A @ Rm.T + t
    err = np.linalg.norm(moved - B, axis=1)
    return RigidMotion(Rm, t, float(np.sqrt(np.mean(err**2))), float(err.max()))


def rotation_pi(point, axis_dir):
    """Half-turn about the line through ``point`` with direction ``axis_dir``."""
    e = np.asarray(axis_dir, dtype=float)
    e = e / np.linalg.norm(e)
    R = 2.0 * np.outer(e, e) - np.eye(3)
    p = np.asarray(point, dtype=float)
    return R, p - R @ p


# ----------------------------------------------------------------------------
# PL isometry

@dataclass(frozen=True, eq=False)
class PLIsometry:
    """Flat polygons (trapezoid coordinates) with one rigid motion each.

    Motion ``i`` acts on ``(X, Y, 0)``.
    """

    lam: float
    t: float
    pieces: list
    rotations: list
    translations: list
    labels: dict = field(default_factory=dict)

    def apply(self, i: int, pts2d) -> np.ndarray:
        p = np.asarray(pts2d, dtype=float)
        p3 = np.concatenate([p, np.zeros(p.shape[:-1] + (1,))], axis=-1)
        return p3 @ self.rotations[i].T + self.translations[i]

    def piece_of(self, pts2d) -> np.ndarray:
        """Index of the triangle containing each point (left, middle, right)."""
        p = np.asarray(pts2d, dtype=float)
        X, Y = p[..., 0], p[..., 1]
        slope = (self.lam - self.t) / 2  # |X| of the H corners at Y = 1
        left = X < -slope * Y
        right = X > slope * Y
        return np.where(left, 0, np.where(right, 2, 1))

    def map(self, pts2d) -> np.ndarray:
        p = np.asarray(pts2d, dtype=float)
        idx = self.piece_of(p)
        out = np.empty(p.shape[:-1] + (3,))
        for i in range(len(self.pieces)):
            m = idx == i
            if np.any(m):
                out[m] = self.apply(i, p[m])
        return out

    def image_pieces(self) -> list:
        return [self.apply(i, poly) for i, poly in enumerate(self.pieces)]

    def continuity_error(self) -> float:
        """Largest mismatch of shared vertices between pieces."""
        worst = 0.0
        for i in range(len(self.pieces)):
            for j in range(i + 1, len(self.pieces)):
                for a in self.pieces[i]:
                    for b in self.pieces[j]:
                        if np.allclose(a, b, atol=1e-14):
                            d = np.linalg.norm(self.apply(i, a) - self.apply(j, b))
                            worst = max(worst, float(d))
        return worst

    def boundary_identification_error(self) -> float:
        """Mismatch between the two slanted sides, which are glued along ``T``."""
        d0 = np.array([-(self.lam + self.t) / 2, 0.0])
        h0 = np.array([-(self.lam - self.t) / 2, 1.0])
        d1 = np.array([(self.lam + self.t) / 2, 0.0])
        h1 = np.array([(self.lam - self.t) / 2, 1.0])
        # the deck map glues the left side bottom-to-top onto the right side top-to-bottom
        ws = np.linspace(0, 1, 11)[:, None]
        left = self.map((1 - ws) * d0 + ws * h0)
        right = self.map((1 - ws) * h1 + ws * d1)
        return float(np.max(np.linalg.norm(left - right, axis=1)))


def triangular_band() -> PLIsometry:
    """The sqrt(3) band: three equilateral triangles folded onto ``PQA``."""
    lam, t = S3, 1.0 / S3
    w = np.array([-2 / S3, 0.0])
    u = np.array([0.0, 0.0])
    x = np.array([-1 / S3, 1.0])
    xr = np.array([1 / S3, 1.0])
    wr = np.array([2 / S3, 0.0])
    v = np.array([0.0, 1.0])
    P = np.array([-1 / S3, 0.0, 0.0])
    Q = np.array([1 / S3, 0.0, 0.0])
    A = np.array([0.0, -1.0, 0.0])
    Rm, cm = np.eye(3), np.array([0.0, -1.0, 0.0])
    Rl, cl = rotation_pi(P, A - P)
    Rr, cr = rotation_pi(Q, A - Q)
    rotations = [Rl @ Rm, Rm, Rr @ Rm]
    translations = [Rl @ cm + cl, cm, Rr @ cm + cr]
    pieces = [np.array([w, u, x]), np.array([u, xr, x]), np.array([u, wr, xr])]
    labels = {"u": u, "v": v, "w": w, "x": x, "w_r": wr, "x_r": xr, "P": P, "Q": Q, "A": A}
    return PLIsometry(lam, t, pieces, rotations, translations, labels)


def triangular_t_pattern() -> tuple[np.ndarray, np.ndarray]:
    """Images of the cut ``T`` (segment ``PQ``) and of the middle bend ``B``."""
    band = triangular_band()
    T = band.map(np.array([[-2 / S3, 0.0], [-1 / S3, 1.0]]))
    B = band.map(np.array([[0.0, 0.0], [0.0, 1.0]]))
    return T, B


def triangular_strip(n_per_piece: int = 16) -> RuledStrip:
    """A bend foliation of the PL band: one fan of bends per triangle.

    Left triangle: fan from ``x`` to the bottom edge ``w u``; middle: fan from
    ``u`` to the top edge ``x x_r``; right: fan from ``x_r`` to ``u w_r``.  The
    PL band is self-touching, so this strip is not embedded.
    """
    band = triangular_band()
    lab = band.labels
    m = int(n_per_piece)
    fr = np.arange(m) / m
    flat = []
    for f in fr:
        flat.append([lab["w"] + f * (lab["u"] - lab["w"]), lab["x"]])
    for f in fr:
        flat.append([lab["u"], lab["x"] + f * (lab["x_r"] - lab["x"])])
    for f in fr:
        flat.append([lab["u"] + f * (lab["w_r"] - lab["u"]), lab["x_r"]])
    flat = np.array(flat)
    space = band.map(flat)
    lam = band.lam
    # cover coordinates: the cut T sits at the left slant side
    cover = flat.copy()
    cover[..., 0] += (lam + band.t) / 2
    crossing = cover.mean(axis=1)[:, 0]
    s = 2 * np.pi * (crossing - crossing[0]) / lam
    return RuledStrip(lam, s, cover, space)


# ----------------------------------------------------------------------------
# smooth family

D60 = np.array([0.5, S3 / 2])
D120 = np.array([-0.5, S3 / 2])
N_A = np.array([-S3 / 2, -0.5])
N_B = np.array([S3 / 2, -0.5])
N_C = np.array([S3 / 2, 0.5])
EZ = np.array([0.0, 0.0, 1.0])


def _reflect_line(p0, d):
    M = 2 * np.outer(d, d) - np.eye(2)
    return M, p0 - M @ p0


@dataclass(frozen=True)
class SmoothLayout:
    """Parameters of the smoothed band for a given ``eps``."""

    eps: float
    R: float
    a: float
    k: float
    lam: float
    y0: float = -1.0

    @classmethod
    def for_eps(cls, eps: float, radius_ratio: float = 1.0 / 40.0) -> "SmoothLayout":
        R = radius_ratio * eps
        a = math.pi * R / S3
        k = 2 * a - math.pi * R / S3
        lam = S3 + 2 * a + 2 * k + 8 * math.pi * R / S3
        return cls(eps, R, a, k, lam)

    @property
    def w(self) -> float:
        """Horizontal width of a radius-``R`` band."""
        return 2 * math.pi * self.R / S3

    @property
    def x_bL(self) -> float:
        return -self.a - self.w - 2 / S3 - self.k

    @property
    def x_bR(self) -> float:
        return self.a + self.w + 2 / S3 + self.k

    def rulings(self) -> dict:
        """Bottom/top x of the piece boundaries, in layout coordinates."""
        a, w, r3 = self.a, self.w, 1 / S3
        return {
            "L0": (self.x_bL, self.x_bL + r3),
            "A0": (-a - w, -a - w - r3),
            "A1": (-a, -a - r3),
            "B0": (a, a + r3),
            "B1": (a + w, a + w + r3),
            "C0": (self.x_bR, self.x_bR - r3),
            "C1": (self.x_bR + 2 * w, self.x_bR + 2 * w - r3),
        }


class _SmoothMap:
    """Piecewise map from layout coordinates to space."""

    def __init__(self, lay: SmoothLayout):
        self.lay = lay
        R = lay.R
        self.MA, self.cA = _reflect_line(np.array([-lay.a, lay.y0]), D120)
        self.MB, self.cB = _reflect_line(np.array([lay.a, lay.y0]), D60)
        self.NC3 = np.append(self.MB @ N_C, 0.0)
        self.R = R

    def middle(self, p):
        p = np.atleast_2d(p)
        return np.stack([p[:, 0], p[:, 1] + self.lay.y0, np.zeros(len(p))], axis=1)

    def left(self, p):
        p = np.atleast_2d(p)
        q = p - math.pi * self.R * N_A
        q = np.stack([q[:, 0], q[:, 1] + self.lay.y0], axis=1)
        r = q @ self.MA.T + self.cA
        return np.column_stack([r, np.full(len(p), 2 * self.R)])

    def right(self, p):
        p = np.atleast_2d(p)
        q = p - math.pi * self.R * N_B
        q = np.stack([q[:, 0], q[:, 1] + self.lay.y0], axis=1)
        r = q @ self.MB.T + self.cB
        return np.column_stack([r, np.full(len(p), -2 * self.R)])

    @staticmethod
    def _band(p, q0, d, n, rad, start, N3, Z):
        p = np.atleast_2d(p)
        v = p - q0
        al = v @ d
        sg = v @ n
        base = start(q0 + al[:, None] * d)
        return base + rad * np.sin(sg / rad)[:, None] * N3 + rad * (1 - np.cos(sg / rad))[:, None] * Z

    def band_a(self, p):
        return self._band(p, np.array([-self.lay.a, 0.0]), D120, N_A, self.R, self.middle, np.append(N_A, 0.0), EZ)

    def band_b(self, p):
        return self._band(p, np.array([self.lay.a, 0.0]), D60, N_B, self.R, self.middle, np.append(N_B, 0.0), -EZ)

    def band_c(self, p):
        return self._band(p, np.array([self.lay.x_bR, 0.0]), D120, N_C, 2 * self.R, self.right, self.NC3, EZ)


def _segment_samples(n_samples: int) -> dict:
    # interior samples per piece; band C and the middle get odd counts so the
    # apex ruling of C and the vertical middle bend are samples themselves
    weights = {"left": 90, "A": 60, "mid": 105, "B": 60, "right": 90, "C": 101}
    total = sum(weights.values()) + 6
    if n_samples == total:
        return weights
    if n_samples < 6 + 6 * 3:
        raise ValueError("need at least 24 samples")
    scale = (n_samples - 6) / sum(weights.values())
    out = {k: max(3, int(round(v * scale))) for k, v in weights.items()}
    for key in ("mid", "C"):
        if out[key] % 2 == 0:
            out[key] += 1
    out["left"] += n_samples - 6 - sum(out.values())
    if out["left"] < 1:
        raise ValueError("sample budget too small")
    return out


def smooth_family(eps: float, n_samples: int = 512) -> RuledStrip:
    """Embedded smooth approximant of the triangular band with ``lam = sqrt(3) + 0.544 eps``."""
    if not (0.0 < eps <= 0.25) or not math.isfinite(eps):
        raise BadEpsilon(f"eps must lie in (0, 0.25], got {eps}")
    lay = SmoothLayout.for_eps(eps)
    fmap = _SmoothMap(lay)
    rul = lay.rulings()
    counts = _segment_samples(n_samples)

    def seg(name):
        b, t = rul[name]
        return np.array([[b, 0.0], [t, 1.0]])

    pieces = [
        ("L0", "A0", counts["left"], fmap.left),
        ("A0", "A1", counts["A"], fmap.band_a),
        ("A1", "B0", counts["mid"], fmap.middle),
        ("B0", "B1", counts["B"], fmap.band_b),
        ("B1", "C0", counts["right"], fmap.right),
        ("C0", "C1", counts["C"], fmap.band_c),
    ]
    flat, space = [], []
    for start, stop, m, f in pieces:
        s0, s1 = seg(start), seg(stop)
        ws = np.arange(m + 1) / (m + 1)
        for w in ws:
            pb = (1 - w) * s0 + w * s1
            flat.append(pb)
            space.append(f(pb))
    flat = np.array(flat)
    space = np.array(space)
    # band C's far ruling is the deck image of L0, so it is not sampled again
    c0 = 0.5 * (flat[0, 0, 0] + flat[0, 1, 0])
    flat[..., 0] -= c0
    crossing = flat.mean(axis=1)[:, 0]
    lam = lay.lam
    s = 2 * np.pi * crossing / lam
    band = FlatMoebius(lam)
    canon = np.array([[canonicalize(FlatPoint(*p), band).as_array() for p in pb] for pb in flat])
    return RuledStrip(lam, s, canon, space)


def smooth_layout(eps: float) -> SmoothLayout:
    if not (0.0 < eps <= 0.25):
        raise BadEpsilon(f"eps must lie in (0, 0.25], got {eps}")
    return SmoothLayout.for_eps(eps)


# ----------------------------------------------------------------------------
# convergence to the PL band

@dataclass(frozen=True)
class ConvergenceRecord:
    eps: float
    lam: float
    t: float
    b: float
    H1: float
    H2: float
    D1: float
    D2: float
    sup_distance: float
    diagonal_distance: float
    residual_g: float
    residual_h: float

    @property
    def lower_bound(self) -> float:
        from .bound import lower_bound_value

        return lower_bound_value(self.t)


def _identify_top_bar(pattern):
    """Return ``(T_index, B_index)``: ``T`` is the bend that contains the carriers' crossing."""
    from .segments import point_segment_distance

    (a0, a1), (b0, b1) = pattern.bends
    # meeting point of the two carrier lines
    u = a1 - a0
    v = b1 - b0
    w0 = a0 - b0
    A = np.array([[u @ u, -(u @ v)], [u @ v, -(v @ v)]])
    rhs = np.array([-(u @ w0), -(v @ w0)])
    sa, sb = np.linalg.solve(A, rhs)
    X = 0.5 * ((a0 + sa * u) + (b0 + sb * v))
    da = point_segment_distance(X, a0, a1)
    db = point_segment_distance(X, b0, b1)
    return (0, 1) if da <= db else (1, 0)


def pattern_prebends(strip: RuledStrip, pattern):
    """Lifted pre-bends of the two bends of a pattern, ordered ``(T, B)``."""
    from .t_pattern import BendField

    field_ = BendField(strip)
    iT, iB = _identify_top_bar(pattern)
    xs = (pattern.source.x0, pattern.source.x1)
    pbs = []
    for x in (xs[iT], xs[iB]):
        f = field_.flat_at(x)
        pbs.append(PreBend(FlatPoint(f[0, 0], 0.0), FlatPoint(f[1, 0], 1.0)))
    return pbs[0], pbs[1]


def _rescale_rows(pts, lam, t, lam_pl, t_pl):
    p = np.array(pts, dtype=float)
    Y = p[..., 1]
    width = lam + t - 2 * t * Y
    width_pl = lam_pl + t_pl - 2 * t_pl * Y
    p[..., 0] = p[..., 0] * width_pl / width
    return p


def convergence_record(strip: RuledStrip, eps: float = math.nan, tol: float = 1e-10, pattern=None,
                       points_per_bend: int = 9) -> ConvergenceRecord:
    from .t_pattern import find_t_pattern

    if pattern is None:
        pattern = find_t_pattern(strip, tol=tol)
    T, B = pattern_prebends(strip, pattern)
    band = strip.band
    trap = cut_along(band, T, B)
    uv = trap.from_cover(B.as_array())
    u, v = uv[0], uv[1]
    d0, _ = trap.D
    h0, _ = trap.H
    D1 = float(u[0] - d0[0])
    H1 = float(v[0] - h0[0])
    D2 = trap.len_D - D1
    H2 = trap.len_H - H1

    pl = triangular_band()
    lifted = lift_strip(strip)
    ws = np.linspace(0.0, 1.0, points_per_bend)[:, None]
    flat_pts = (lifted.flat[:, None, 0] * (1 - ws) + lifted.flat[:, None, 1] * ws).reshape(-1, 2)
    space_pts = (lifted.space[:, None, 0] * (1 - ws) + lifted.space[:, None, 1] * ws).reshape(-1, 3)
    tz = trap.from_cover(flat_pts)
    tz_pl = _rescale_rows(tz, trap.lam, trap.t, pl.lam, pl.t)
    target = pl.map(tz_pl)
    motion = align_rigid(space_pts, target, allow_reflection=True)
    sup = float(np.max(np.linalg.norm(motion.apply(space_pts) - target, axis=1)))

    # dotted diagonals u-x and u-x_r of the PL trapezoid, in this strip's trapezoid
    corners = np.array([[0.0, 0.0], [-(trap.lam - trap.t) / 2, 1.0], [(trap.lam - trap.t) / 2, 1.0]])
    pre_tz = trap.from_cover(lifted.flat.reshape(-1, 2)).reshape(-1, 2, 2)
    zero = np.zeros((len(pre_tz), 1))
    pad = lambda a: np.concatenate([a, zero], axis=1)  # noqa: E731
    diag = 0.0
    for corner in corners[1:]:
        hd = hausdorff_segments(pad(np.repeat(corners[:1], len(pre_tz), 0)), pad(np.repeat(corner[None], len(pre_tz), 0)),
                                pad(pre_tz[:, 0]), pad(pre_tz[:, 1]))
        diag = max(diag, float(np.min(hd)))
    return ConvergenceRecord(
        eps=float(eps), lam=float(strip.lam), t=float(trap.t), b=float(trap.b),
        H1=H1, H2=H2, D1=D1, D2=D2, sup_distance=sup, diagonal_distance=diag,
        residual_g=float(pattern.residual_g), residual_h=float(pattern.residual_h),
    )


def convergence_metrics(strips, eps_values=None, tol: float = 1e-10) -> list[ConvergenceRecord]:
    strips = list(strips)
    if eps_values is None:
        eps_values = [math.nan] * len(strips)
    return [convergence_record(s, e, tol=tol) for s, e in zip(strips, eps_values)]


# ----------------------------------------------------------------------------
# export

_Y_UP = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])


def obj_text(vertices, faces, comment: str = "") -> str:
    """ASCII OBJ with triangles only; z-up input is rotated to y-up."""
    V = np.asarray(vertices, dtype=float) @ _Y_UP.T
    F = np.asarray(faces, dtype=int)
    if F.ndim != 2 or F.shape[1] != 3:
        raise ValueError("faces must be triangles")
    lines = [f"# {c}" for c in comment.splitlines() if c] if comment else []
    lines += [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in V]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in F]
    return "\n".join(lines) + "\n"


def strip_mesh(strip: RuledStrip) -> tuple[np.ndarray, np.ndarray]:
    """Triangulate consecutive bends, closing the loop with the Moebius flip."""
    lifted = lift_strip(strip)
    n = strip.n
    V = lifted.space.reshape(-1, 3)
    faces = []
    for i in range(n):
        b0, t0 = 2 * i, 2 * i + 1
        if i + 1 < n:
            b1, t1 = 2 * (i + 1), 2 * (i + 1) + 1
        else:
            b1, t1 = 1, 0  # wrap: bottom and top trade places
        faces.append((b0, b1, t1))
        faces.append((b0, t1, t0))
    return V, np.array(faces)


def pl_mesh(band: PLIsometry | None = None) -> tuple[np.ndarray, np.ndarray]:
    band = band or triangular_band()
    V = np.concatenate(band.image_pieces(), axis=0)
    F = np.arange(len(V)).reshape(-1, 3)
    return V, F


def write_obj(path, vertices, faces, comment: str = "") -> None:
    atomic_write_text(path, obj_text(vertices, faces, comment))


def read_obj_vertices(path) -> np.ndarray:
    """Vertices of an OBJ file, rotated back from y-up to z-up."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("v "):
                rows.append([float(v) for v in line.split()[1:4]])
    return np.array(rows) @ _Y_UP
