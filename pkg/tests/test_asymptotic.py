import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moebiuskit.asymptotic import (check_normalization, cone, connector_experiment, cylinder, gauss_sample,
                                   generalized_cone, load_grid_csv, parabolic_cylinder, plane, polygon_mask, preset,
                                   random_developable, sphere, trace_asymptotic)
from moebiuskit.errors import BoundaryPoint, FlatPointReached, NormalizationFailed


def test_kernel_at_origin_of_y_squared():
    s = gauss_sample(parabolic_cylinder(1.0), (0.0, 0.0))
    assert np.allclose(s.n, [0, 0, 1])
    assert np.allclose(s.v, [1, 0, 0], atol=1e-9)
    assert s.mean_curvature_nonzero


def test_shape_operator_of_half_y_squared():
    s = gauss_sample(parabolic_cylinder(0.5), (0.0, 0.0))
    assert sorted(s.singular_values) == pytest.approx([0.0, 1.0], abs=1e-6)


def test_plane_is_flagged_flat():
    s = gauss_sample(plane(), (0.3, -0.2))
    assert np.allclose(s.dn, 0.0)
    assert not s.mean_curvature_nonzero
    with pytest.raises(FlatPointReached) as info:
        trace_asymptotic(plane(), (0.0, 0.0))
    assert len(info.value.polyline) == 1


def test_boundary_point():
    with pytest.raises(BoundaryPoint):
        gauss_sample(cylinder(), (0.0, 0.9))


def test_y_squared_trace_runs_along_x_axis():
    tr = trace_asymptotic(parabolic_cylinder(1.0), (0.5, 0.0), step=0.01, max_len=1.0)
    assert np.allclose(tr.points[:, 1:], 0.0, atol=1e-12)
    assert tr.length == pytest.approx(1.0)


def test_cylinder_trace_parallel_to_axis():
    tr = trace_asymptotic(cylinder(), (0.0, 0.3), step=0.01, max_len=0.5)
    assert tr.chord_deviation() <= 1e-8
    assert np.allclose(tr.params[:, 1], 0.3, atol=1e-8)


def test_trace_stops_at_boundary():
    tr = trace_asymptotic(cone(), (2.5, 0.1), step=0.05, max_len=10.0)
    assert tr.stop == "boundary"
    assert np.all(np.hypot(tr.params[:, 0], tr.params[:, 1]) <= 3.0)


@given(st.integers(0, 2**32 - 1))
def test_random_developable_traces(seed):
    rng = np.random.default_rng(seed)
    patch = random_developable(rng)
    r, a = 0.4 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)
    p0 = (r * math.cos(a), r * math.sin(a))
    s = gauss_sample(patch, p0)
    frame = np.array([s.v, s.w, s.n])
    assert np.allclose(frame @ frame.T, np.eye(3), atol=1e-9)
    assert np.linalg.norm(s.dn @ (s.frame @ s.v)) < 1e-6
    tr = trace_asymptotic(patch, p0, step=0.02, max_len=0.4)
    assert tr.chord_deviation() <= 1e-6
    assert tr.normal_spread() <= 1e-6


def test_sphere_negative_control():
    tr = trace_asymptotic(sphere(), (0.1, 0.2), step=0.01, max_len=0.5)
    assert tr.chord_deviation() >= 1e-3


def test_generalized_cone_rulings_meet_at_apex():
    patch = generalized_cone((0.4, 0.0), L=4.0, angle=0.0)
    tr = trace_asymptotic(patch, (0.0, 0.3), step=0.01, max_len=0.5)
    d = tr.points[-1] - tr.points[0]
    # the ruling through (0, 0.3) heads to the apex (4, 0, 0)
    to_apex = np.array([4.0, 0.0, 0.0]) - tr.points[0]
    cos = d @ to_apex / np.linalg.norm(d) / np.linalg.norm(to_apex)
    assert abs(cos) == pytest.approx(1.0, abs=1e-9)


def test_connector_ratios():
    st_cone = connector_experiment(cone(C=0.2, L=6.0), delta=0.05)
    assert st_cone.below_three
    assert st_cone.max_ratio == pytest.approx((6.0 - 0.05) / (6.0 - 1.0), abs=1e-6)
    st_cyl = connector_experiment(parabolic_cylinder(0.15), delta=0.05)
    assert st_cyl.max_ratio == pytest.approx(1.0, abs=1e-9)


def test_normalization_failures():
    with pytest.raises(NormalizationFailed):
        connector_experiment(parabolic_cylinder(1.0))
    with pytest.raises(NormalizationFailed):
        check_normalization(cylinder())
    assert check_normalization(cone()) < 1.25


def test_mask_restricts_connectors():
    mask = [(0.0, -0.05), (2.0, -0.05), (2.0, 0.3), (0.0, 0.3)]
    st_all = connector_experiment(cone(), delta=0.05)
    st_mask = connector_experiment(cone(), delta=0.05, mask=polygon_mask(mask))
    assert st_mask.n_connectors < st_all.n_connectors
    assert st_mask.n_discarded > 0


def test_grid_csv_patch(tmp_path):
    xs = np.linspace(-3.2, 3.2, 65)
    ys = np.linspace(-3.2, 3.2, 65)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    Z = 0.15 * Y**2
    path = tmp_path / "grid.csv"
    rows = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    np.savetxt(path, rows, delimiter=",", header="x,y,z", comments="")
    patch = load_grid_csv(path)
    assert patch.radius == pytest.approx(3.2)
    s = gauss_sample(patch, (0.2, 0.1))
    assert np.allclose(s.v, [1, 0, 0], atol=1e-6)
    tr = trace_asymptotic(patch, (0.0, 0.2), step=0.02, max_len=1.0)
    assert tr.chord_deviation() <= 1e-6
    bad = tmp_path / "bad.csv"
    np.savetxt(bad, rows[:-1], delimiter=",")
    with pytest.raises(ValueError):
        load_grid_csv(bad)


def test_preset_lookup():
    assert preset("cone", C=0.1).params["C"] == 0.1
    with pytest.raises(ValueError):
        preset("torus")
