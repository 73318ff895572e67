import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moebiuskit.errors import ContinuityError, EndpointError, NotFound, NotParallel, PoleError, ZeroOnPath
from moebiuskit.line_geometry import OrientedLine
from moebiuskit.strip_model import RuledStrip
from moebiuskit.t_pattern import (BendField, BendPair, FunctionLineField, LineFamily, SearchConfig, SpherePoint,
                                  StubField, F_eval, certified_zeros, check_line_family, find_t_pattern,
                                  find_t_patterns, grid_oracle, lemma_tt_solve, meridian, pair_to_sphere,
                                  propagate_orientation, sphere_to_pair, winding_number)

TWO_PI = 2 * math.pi


def stub(theta, phi):
    # zeros at (1, pi/2) and its antipode (1 + pi, pi/2)
    return np.cos(phi), np.sin(phi) * np.sin(theta - 1.0)


@given(st.floats(0, TWO_PI, exclude_max=True), st.floats(1e-6, math.pi - 1e-6))
def test_chart_round_trip(theta, phi):
    p = SpherePoint(theta, phi)
    q = pair_to_sphere(sphere_to_pair(p))
    assert q.phi == pytest.approx(phi, abs=1e-9)
    assert math.remainder(q.theta - theta, TWO_PI) == pytest.approx(0.0, abs=1e-9)


def test_chart_poles():
    with pytest.raises(PoleError):
        sphere_to_pair(SpherePoint.north())
    with pytest.raises(PoleError):
        sphere_to_pair(SpherePoint(0.0, 0.0))
    with pytest.raises(PoleError):
        pair_to_sphere(BendPair(1.0, 1.0))
    assert SpherePoint.north().antipode().pole == "-"
    a = SpherePoint(0.5, 0.3).antipode()
    assert (a.theta, a.phi) == pytest.approx((0.5 + math.pi, math.pi - 0.3))


def test_stub_search_finds_both_zeros():
    zeros, _ = certified_zeros(StubField(stub), tol=1e-12)
    assert len(zeros) == 2
    got = sorted((z.theta, z.phi) for z in zeros)
    assert got[0] == pytest.approx((1.0, math.pi / 2), abs=1e-9)
    assert got[1] == pytest.approx((1.0 + math.pi, math.pi / 2), abs=1e-9)
    assert {z.winding for z in zeros} <= {-1, 1}


def test_stub_without_zero_reports_not_found():
    field_ = StubField(lambda th, ph: (np.cos(ph), np.sin(ph) + 0 * th))
    zeros, _ = certified_zeros(field_, tol=1e-12, config=SearchConfig(n_theta=32, n_phi=16))
    assert zeros == []


def test_winding_on_stub_meridians():
    w1 = winding_number(StubField(stub), meridian(2.0)).w
    w2 = winding_number(StubField(stub), meridian(2.0 + math.pi)).w
    assert abs(2 * w1 - round(2 * w1)) < 1e-6
    assert w1 == pytest.approx(-w2)
    with pytest.raises(ZeroOnPath):
        winding_number(StubField(stub), meridian(1.0, n=257))


def test_bend_field_equivariance(smooth_strips):
    bf = BendField(smooth_strips[0.2])
    rng = np.random.default_rng(0)
    x0 = rng.uniform(0, TWO_PI, 200)
    x1 = x0 + rng.uniform(0.01, TWO_PI - 0.01, 200)
    g, h = bf.F(x0, x1)
    gs, hs = bf.F(x1, x0 + TWO_PI)
    assert np.max(np.abs(gs + g)) < 1e-10 and np.max(np.abs(hs + h)) < 1e-10


def test_bend_field_antiperiodic(smooth_strips):
    bf = BendField(smooth_strips[0.2])
    m0, u0 = bf.lines(0.7)
    m1, u1 = bf.lines(0.7 + TWO_PI)
    assert np.allclose(m0, m1) and np.allclose(u0, -u1)


def test_pole_limits(smooth_strips):
    bf = BendField(smooth_strips[0.1])
    phis = np.geomspace(0.1, 1e-5, 10)
    g, h = bf.F_sphere(np.full(10, 2.0), phis)
    assert np.all(np.diff(1 - g) <= 0) and g[-1] > 1 - 1e-8 and abs(h[-1]) < 1e-4
    g, h = bf.F_sphere(np.full(10, 2.0), math.pi - phis)
    assert g[-1] < -1 + 1e-8 and abs(h[-1]) < 1e-4


def test_F_eval_and_orientation(smooth_strips):
    strip = smooth_strips[0.2]
    bf = BendField(strip)
    g, h = F_eval(strip, BendPair(0.5, 2.0))
    assert (g, h) == pytest.approx(tuple(float(v) for v in bf.F(0.5, 2.0)))
    assert F_eval(strip, BendPair(1.0, 1.0)) == (1.0, 0.0)
    _, u = bf.lines(0.5)
    d = propagate_orientation(strip, 0.5, 0.5 + TWO_PI, -u)
    assert np.allclose(d, bf.lines(0.5)[1])
    with pytest.raises(NotParallel):
        propagate_orientation(strip, 0.5, 1.0, np.cross(u, [0.0, 0.0, 1.0]))


def test_find_t_pattern(smooth_strips):
    for eps, strip in smooth_strips.items():
        pat = find_t_pattern(strip)
        assert pat.carriers_ok()
        assert pat.min_distance > 0
        assert max(abs(pat.residual_g), abs(pat.residual_h)) < 1e-8
        assert all(c.half_integral for c in pat.certificate)


def test_find_t_patterns_come_in_pairs(smooth_strips):
    pats = find_t_patterns(smooth_strips[0.2])
    assert len(pats) % 2 == 0
    thetas = sorted(p.sphere.theta for p in pats)
    assert thetas == sorted(thetas)


def test_not_found_when_depth_is_exhausted(smooth_strips):
    with pytest.raises(NotFound):
        find_t_pattern(smooth_strips[0.2], config=SearchConfig(n_theta=16, n_phi=8, max_depth=1))


def test_reversed_bend_breaks_continuity(smooth_strips):
    strip = smooth_strips[0.2]
    bends = np.array(strip.bends)
    bends[10] = bends[10][::-1]
    with pytest.raises(ContinuityError):
        BendField(RuledStrip(strip.lam, strip.s, strip.pre, bends))


# line families ------------------------------------------------------------------

def test_screw_family_has_known_solution():
    fam = LineFamily((1, 0, 0), (0, 1, 0), a=1.0)
    res = lemma_tt_solve(fam)
    assert res.residual < 1e-9
    assert (res.r, res.s) == pytest.approx((0.25, 0.75), abs=1e-8)


@pytest.mark.parametrize("kind", ["screw", "pencil", "generic"])
def test_tt_solver_beats_oracle(kind):
    rng = np.random.default_rng({"screw": 1, "pencil": 2, "generic": 3}[kind])
    for _ in range(4):
        fam = LineFamily.random(rng, kind)
        res = lemma_tt_solve(fam)
        _, _, best, _ = grid_oracle(FunctionLineField(fam, fam.vectorized), n=400)
        assert res.residual < 1e-9
        assert res.residual <= best + 1e-12
        assert 0 <= res.r < res.s < 1


def test_tt_solver_on_sampled_lines():
    fam = LineFamily((0, 0, 1), (1, 1, 0), c=(0.5, 0, 0), a=0.7)
    lines = [fam(t) for t in np.linspace(0, 1, 801)]
    res = lemma_tt_solve(lines)
    assert res.residual < 1e-9


def test_line_family_validation():
    fam = LineFamily((1, 0, 0), (0, 1, 0), a=1.0)
    lines = [fam(t) for t in np.linspace(0, 1, 101)]
    check_line_family(lines)
    with pytest.raises(EndpointError):
        check_line_family(lines[:-1] + [OrientedLine(lines[-1].anchor, -lines[-1].direction)])
    with pytest.raises(EndpointError):
        check_line_family(lines[:-1] + [OrientedLine(lines[-1].anchor + 1.0, lines[-1].direction)])
    with pytest.raises(ContinuityError):
        check_line_family(lines[::25])
