import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moebiuskit.bound import SQRT3
from moebiuskit.constructions import (align_rigid, convergence_record, pl_mesh, read_obj_vertices, rotation_pi,
                                      smooth_family, smooth_layout, strip_mesh, triangular_band, triangular_strip,
                                      triangular_t_pattern, write_obj)
from moebiuskit.errors import BadEpsilon, DegenerateConfiguration
from moebiuskit.line_geometry import OrientedLine, is_perpendicular_intersecting
from moebiuskit.strip_model import validate_foliation


def test_pl_band_folds_onto_equilateral_triangle():
    band = triangular_band()
    V, F = pl_mesh(band)
    assert np.allclose(V[:, 2], 0.0, atol=1e-12)
    P, Q, A = (band.labels[k] for k in ("P", "Q", "A"))
    for a, b in ((P, Q), (Q, A), (A, P)):
        assert np.linalg.norm(a - b) == pytest.approx(2 / SQRT3, abs=1e-12)
    # every image vertex is a corner of the triangle
    for v in V:
        assert min(np.linalg.norm(v - c) for c in (P, Q, A)) < 1e-12
    assert band.continuity_error() < 1e-12
    assert band.boundary_identification_error() < 1e-12


def test_pl_pieces_are_isometries():
    band = triangular_band()
    for R in band.rotations:
        assert np.allclose(R @ R.T, np.eye(3))
    for i, piece in enumerate(band.pieces):
        img = band.apply(i, piece)
        for a in range(3):
            for b in range(a + 1, 3):
                assert np.linalg.norm(img[a] - img[b]) == pytest.approx(np.linalg.norm(piece[a] - piece[b]))


def test_pl_t_pattern():
    T, B = triangular_t_pattern()
    LT = OrientedLine(T[0], T[1] - T[0])
    LB = OrientedLine(B[0], B[1] - B[0])
    assert is_perpendicular_intersecting(LT, LB)
    assert np.linalg.norm(T[1] - T[0]) == pytest.approx(2 / SQRT3)
    assert np.linalg.norm(B[1] - B[0]) == pytest.approx(1.0)


def test_pl_strip_is_isometric_but_not_embedded():
    strip = triangular_strip(8)
    rep = validate_foliation(strip)
    assert rep.count("isometry") == 0
    assert rep.count("intersection") > 0


def test_rotation_pi_fixes_axis():
    R, c = rotation_pi(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
    p = np.array([1.0, 3.0, 0.0])
    assert np.allclose(R @ p + c, p)
    q = np.array([2.0, 0.0, 0.0])
    assert np.allclose(R @ q + c, [0.0, 0.0, 0.0])


@given(st.integers(0, 2**32 - 1))
def test_align_rigid_recovers_motion(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(10, 3))
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    B = A @ Q.T + rng.normal(size=3)
    m = align_rigid(A, B)
    assert m.proper
    assert m.max_error < 1e-9


def test_align_rigid_degenerate():
    A = np.zeros((4, 3))
    with pytest.raises(DegenerateConfiguration):
        align_rigid(A, A)


@pytest.mark.parametrize("eps", [0.25, 0.2, 0.1, 0.05, 0.02])
def test_smooth_lambda_gap(eps):
    gap = smooth_layout(eps).lam - SQRT3
    assert 0 < gap <= 4 * eps


def test_smooth_family_bad_eps():
    for eps in (0.0, -0.1, 0.3, math.nan):
        with pytest.raises(BadEpsilon):
            smooth_family(eps)


def test_smooth_family_shape(smooth_strips):
    for eps, strip in smooth_strips.items():
        assert strip.n == 512
        assert strip.lam == pytest.approx(smooth_layout(eps).lam)
        assert np.all(np.diff(strip.s) > 0)


def test_convergence_records(smooth_strips):
    recs = [convergence_record(s, e) for e, s in smooth_strips.items()]
    sup = [r.sup_distance for r in recs]
    assert sup[0] > sup[1] > sup[2]
    last = recs[-1]
    assert abs(last.H1 - 1 / SQRT3) <= 0.02 and abs(last.H2 - 1 / SQRT3) <= 0.02
    assert abs(last.D1 - 2 / SQRT3) <= 0.02 and abs(last.D2 - 2 / SQRT3) <= 0.02
    for r in recs:
        assert SQRT3 - 1e-12 <= r.lower_bound < r.lam
        assert r.H1 + r.H2 + r.D1 + r.D2 == pytest.approx(2 * r.lam, abs=1e-9)


def test_obj_round_trip(tmp_path, smooth_strips):
    V, F = strip_mesh(smooth_strips[0.2])
    assert F.shape[1] == 3 and F.max() < len(V)
    path = tmp_path / "band.obj"
    write_obj(path, V, F, comment="test")
    assert np.allclose(read_obj_vertices(path), V, atol=1e-15)
    text = path.read_text()
    assert text.startswith("# test")
    assert all(len(line.split()) == 4 for line in text.splitlines() if line.startswith("f "))
