import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from moebiuskit.bound import (SQRT3, T0, TriangleInstance, alpha, beta, check_length_identities, crossing_point,
                              golden_section, lower_bound, lower_bound_value, minimize_bound, vee_length,
                              vee_lower_bound, vee_reflection_bound)
from moebiuskit.errors import BadBracket, HeightTooSmall, InconsistentInput
from moebiuskit.strip_model import FlatMoebius, PreBend, cut_along


def test_constants_at_t0():
    assert alpha(T0) == pytest.approx(2 * SQRT3, abs=1e-12)
    assert beta(T0) == pytest.approx(2 * SQRT3, abs=1e-12)
    assert lower_bound(T0).active_branch == "both"
    assert lower_bound_value(T0) == pytest.approx(SQRT3, abs=1e-12)


def test_closed_forms_at_zero():
    assert alpha(0.0) == pytest.approx(1 + math.sqrt(5))
    assert beta(0.0) == pytest.approx(2 * math.sqrt(5))
    assert lower_bound(0.0).active_branch == "beta"
    assert lower_bound(2.0).active_branch == "alpha"


def test_minimize_bound():
    t, v = minimize_bound(0.0, 2.0)
    assert t == pytest.approx(0.5773502692, abs=1e-9)
    assert v == pytest.approx(SQRT3, abs=1e-12)
    # a bracket on the alpha side hits its left end
    t, v = minimize_bound(0.8, 1.0)
    assert t == pytest.approx(0.8, abs=1e-9)
    with pytest.raises(BadBracket):
        minimize_bound(1.0, 1.0)
    with pytest.raises(BadBracket):
        minimize_bound(0.0, math.inf)


def test_golden_section_on_smooth_function():
    x, fx, it = golden_section(lambda t: (t - 0.3) ** 2, -1.0, 2.0)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert it < 200


def test_single_crossing():
    roots = crossing_point(-10, 10)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(T0, abs=1e-9)


@given(st.floats(0, 10), st.floats(0, 10))
def test_monotone(a, b):
    assume(abs(a - b) > 1e-9)
    lo, hi = min(a, b), max(a, b)
    assert alpha(lo) < alpha(hi)
    assert beta(lo) > beta(hi)


@given(st.floats(-5, 5))
def test_bound_at_least_sqrt3(t):
    assert lower_bound_value(t) >= SQRT3 - 1e-12


@given(st.floats(-3, 3), st.floats(1, 5), st.floats(-1, 2))
def test_vee_lemma(t, h, u):
    tri = TriangleInstance.from_t(t, h, u * math.hypot(1, t))
    assert vee_length(tri) >= vee_reflection_bound(tri) - 1e-12
    assert vee_reflection_bound(tri) >= vee_lower_bound(t, h) - 1e-12


def test_vee_equality_case():
    tri = TriangleInstance.from_t(0.7, 1.0)
    assert vee_length(tri) == pytest.approx(vee_lower_bound(0.7), abs=1e-14)
    with pytest.raises(HeightTooSmall):
        TriangleInstance.from_t(0.7, 0.9)
    with pytest.raises(HeightTooSmall):
        vee_lower_bound(0.7, 0.5)


def test_length_identities_on_pl_trapezoid():
    trap = cut_along(FlatMoebius(SQRT3), PreBend.vertical(0.0, T0))
    lengths = {"H'": trap.len_H, "D'": trap.len_D, "T'": math.hypot(1, T0), "B'": 1.0}
    rep = check_length_identities(trap, lengths, height=1.0)
    assert rep.ok, rep.violations
    # the PL band is the equality case: every slack vanishes
    assert rep.total_slack == pytest.approx(0.0, abs=1e-12)


def test_length_identities_flag_violations():
    trap = cut_along(FlatMoebius(2.0), PreBend.vertical(0.0, 0.3))
    rep = check_length_identities(trap, {"H'": 0.1, "D'": trap.len_D, "T'": 1.2, "B'": 0.5})
    assert "H'-T'" in rep.violations and "B'-1" in rep.violations
    with pytest.raises(InconsistentInput):
        check_length_identities(trap, {"H'": 1.0})
    with pytest.raises(InconsistentInput):
        check_length_identities(trap, {"H'": -1.0, "D'": 1.0, "T'": 1.0, "B'": 1.0})


def test_vectorised_alpha_beta():
    ts = np.linspace(0, 1, 5)
    assert alpha(ts).shape == (5,)
    assert np.all(np.diff(alpha(ts)) > 0) and np.all(np.diff(beta(ts)) < 0)
