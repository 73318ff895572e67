import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from moebiuskit.errors import (BadEpsilon, DegenerateSegment, InvalidCut, NonDevelopable, NotEmbedded, OverlapError,
                               StripFormatError, TooFewSamples)
from moebiuskit.segments import hausdorff_segments, segment_distance, segments_cross_2d
from moebiuskit.strip_model import (FlatMoebius, FlatPoint, PreBend, RuledStrip, canonicalize, centerline_crossings,
                                    cut_along, deck, develop, dumps_strip, interpolate_flat_region, lift_segment,
                                    lift_strip, load_strip, loads_strip, save_strip, trim, validate_foliation)

lams = st.floats(0.5, 4.0)
fracs = st.floats(-0.999, 0.999)


def test_deck_is_an_involution_up_to_translation():
    p = np.array([0.3, 0.2])
    assert np.allclose(deck(p, 1, 2.0), [2.3, 0.8])
    assert np.allclose(deck(deck(p, 1, 2.0), -1, 2.0), p)
    assert np.allclose(deck(p, 2, 2.0), [4.3, 0.2])


def test_canonicalize_wraps_and_flips():
    band = FlatMoebius(2.0)
    q = canonicalize(FlatPoint(2.5, 0.25), band)
    assert (q.x, q.y) == pytest.approx((0.5, 0.75))
    q = canonicalize(FlatPoint(-0.5, 0.0), band)
    assert (q.x, q.y) == pytest.approx((1.5, 1.0))


def test_from_endpoints_picks_the_short_lift():
    band = FlatMoebius(2.0)
    pb = PreBend.from_endpoints((0.2, 0.0), (1.9, 0.0), band)
    # (1.9, 0) on the bottom is (-0.1, 1) on the top of the previous copy
    assert pb.t == pytest.approx(-0.3)
    assert centerline_crossings(pb, band) == 1


def test_degenerate_and_long_prebends():
    band = FlatMoebius(1.0)
    with pytest.raises(DegenerateSegment):
        PreBend.from_endpoints((0.2, 0.0), (0.2, 0.0), band)
    with pytest.raises(NotEmbedded):
        centerline_crossings(PreBend.vertical(0.0, 1.5), band)
    with pytest.raises(ValueError):
        lift_segment((0.0, 0.5), (0.0, 1.0), 1.0)


@given(lams, st.floats(0, 1), fracs)
def test_every_prebend_crosses_once(lam, x, f):
    band = FlatMoebius(lam)
    pb = PreBend(FlatPoint(x * lam, 0.0), FlatPoint(x * lam + f * lam, 1.0))
    assert centerline_crossings(pb, band) == 1
    assert centerline_crossings((pb.bottom.as_array(), pb.top.as_array()), band) == 1


@given(lams, st.floats(0, 1), fracs)
def test_cut_along_identities(lam, x, f):
    band = FlatMoebius(lam)
    pb = PreBend(FlatPoint(x * lam, 0.0), FlatPoint(x * lam + f * lam, 1.0))
    trap = cut_along(band, pb)
    assert trap.t >= 0
    assert trap.len_H + trap.len_D == pytest.approx(2 * lam, abs=1e-12)
    assert trap.len_D - 2 * trap.t - trap.len_H == pytest.approx(0.0, abs=1e-12)
    # T's bottom end goes to D's left end, its top to H's left end
    pts = trap.from_cover(pb.as_array())
    d0, _ = trap.D
    h0, _ = trap.H
    assert np.allclose(pts, [d0, h0], atol=1e-9)
    assert np.allclose(trap.to_cover(trap.from_cover(pb.as_array())), pb.as_array(), atol=1e-9)


def test_cut_along_rejects_long_cut():
    with pytest.raises(InvalidCut):
        cut_along(FlatMoebius(1.0), PreBend.vertical(0.0, 1.2))


def test_trapezoid_vertices_and_reflection():
    trap = cut_along(FlatMoebius(2.0), PreBend.vertical(0.4, -0.5))
    assert trap.reflected and trap.t == pytest.approx(0.5)
    v = trap.vertices()
    assert np.allclose(v[:, 1], [0, 0, 1, 1])
    assert v[1, 0] - v[0, 0] == pytest.approx(2.5)
    assert v[2, 0] - v[3, 0] == pytest.approx(1.5)


def test_interpolate_flat_region():
    a, b = PreBend.vertical(0.0, 0.2), PreBend.vertical(1.0, -0.2)
    mids = interpolate_flat_region(a, b, 3)
    assert [m.crossing for m in mids] == pytest.approx([0.25, 0.5, 0.75])
    with pytest.raises(OverlapError):
        interpolate_flat_region(PreBend.vertical(0.0, 0.5), PreBend.vertical(0.1, -0.5), 2)


def test_smooth_strip_validates(smooth_strips):
    for strip in smooth_strips.values():
        rep = validate_foliation(strip)
        assert rep.ok, rep.summary()
        assert rep.min_bend_distance > 0
        assert rep.boundary_length == pytest.approx(2 * strip.lam, abs=1e-4)


def test_validation_catches_intersections(smooth_strips):
    strip = smooth_strips[0.2]
    bends = np.array(strip.bends)
    # drag one bend through a distant one
    bends[100] = bends[300]
    bad = RuledStrip(strip.lam, strip.s, strip.pre, bends)
    rep = validate_foliation(bad)
    assert rep.count("intersection") > 0
    assert not rep.ok


def test_validation_catches_overlap_and_order(smooth_strips):
    strip = smooth_strips[0.2]
    pre = np.array(strip.pre)
    pre[10, 1, 0] += 0.3
    rep = validate_foliation(RuledStrip(strip.lam, strip.s, pre, strip.bends))
    assert rep.count("overlap") + rep.count("isometry") > 0
    s = np.array(strip.s)
    s[5], s[6] = s[6], s[5]
    assert validate_foliation(RuledStrip(strip.lam, s, strip.pre, strip.bends)).count("order") > 0


def test_too_few_samples(smooth_strips):
    with pytest.raises(TooFewSamples):
        validate_foliation(smooth_strips[0.2].subsample(np.arange(5)))


def test_strip_arrays_are_read_only(smooth_strips):
    with pytest.raises(ValueError):
        smooth_strips[0.2].pre[0, 0, 0] = 1.0


def test_lift_is_continuous(smooth_strips):
    lifted = lift_strip(smooth_strips[0.1])
    assert np.all(np.diff(lifted.crossing) > 0)
    assert lifted.crossing[-1] - lifted.crossing[0] < lifted.lam
    assert np.all(np.abs(lifted.t) < lifted.lam)


def test_trim_composition(smooth_strips):
    strip = smooth_strips[0.2]
    e1, e2 = 0.05, 0.1
    e = (1 - (1 - 2 * e1) * (1 - 2 * e2)) / 2
    a, b = trim(trim(strip, e1), e2), trim(strip, e)
    assert np.allclose(a.pre, b.pre, atol=1e-10)
    assert np.allclose(a.bends, b.bends, atol=1e-10)
    assert b.lam == pytest.approx(strip.lam / (1 - 2 * e), abs=1e-12)
    assert trim(strip, 0.0).lam == strip.lam
    with pytest.raises(BadEpsilon):
        trim(strip, 0.5)


def test_trimmed_strip_is_still_a_foliation(smooth_strips):
    rep = validate_foliation(trim(smooth_strips[0.2], 0.1))
    assert rep.count("isometry") == 0 and rep.count("intersection") == 0


def test_develop_recovers_layout(smooth_strips):
    dev = develop(smooth_strips[0.1])
    assert dev.round_trip_error < 1e-5
    assert dev.max_quad_error < 1e-6


def test_develop_rejects_stretched_strip(smooth_strips):
    strip = smooth_strips[0.2]
    bends = np.array(strip.bends)
    bends[200:, :, 2] *= 1.5
    with pytest.raises(NonDevelopable):
        develop(RuledStrip(strip.lam, strip.s, strip.pre, bends))


def test_json_round_trip(tmp_path, smooth_strips):
    strip = smooth_strips[0.2]
    path = tmp_path / "strip.json"
    save_strip(strip, path)
    back = load_strip(path)
    assert back.lam == strip.lam
    assert np.array_equal(back.pre, strip.pre) and np.array_equal(back.bends, strip.bends)
    with pytest.raises(StripFormatError):
        loads_strip("{")
    with pytest.raises(StripFormatError):
        loads_strip('{"lambda": 1.0}')
    with pytest.raises(StripFormatError):
        loads_strip(dumps_strip(strip).replace('"lambda"', '"lam"'))


# segments ---------------------------------------------------------------------

pts = st.tuples(*(st.floats(-3, 3, allow_nan=False),) * 3)


@given(pts, pts, pts, pts)
def test_segment_distance_against_sampling(a, b, c, d):
    a, b, c, d = map(np.array, (a, b, c, d))
    exact = float(segment_distance(a, b, c, d))
    s = np.linspace(0, 1, 201)
    P = a + s[:, None] * (b - a)
    Q = c + s[:, None] * (d - c)
    brute = np.min(np.linalg.norm(P[:, None] - Q[None], axis=2))
    assert exact <= brute + 1e-9
    # grid spacing bounds how far the sampled minimum can sit above the true one
    assert brute - exact <= (np.linalg.norm(b - a) + np.linalg.norm(d - c)) / 200 + 1e-9


def test_crossing_predicate():
    assert segments_cross_2d((0, 0), (1, 1), (0, 1), (1, 0))
    assert not segments_cross_2d((0, 0), (1, 0), (0, 1), (1, 1))
    h = hausdorff_segments(np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([1.0, 1.0, 0]))
    assert float(h) == pytest.approx(1.0)
    assert math.isclose(float(segment_distance(np.zeros(3), np.zeros(3), np.ones(3), np.ones(3))), math.sqrt(3))
