"""Deterministic property suites behind ``moebiuskit verify``.

Each suite draws from ``numpy.random.default_rng([seed, suite_index])`` so
that suites are reproducible on their own and in any combination.  Reports
contain no timings, which keeps repeated runs byte-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import __version__

SUITE_ORDER = ("line", "strip", "tpattern", "bound", "limit", "asymptotic")


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    passed: bool
    count: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  {self.detail}" if self.detail else ""
        return f"[{status}] {self.suite}: {self.name} (n={self.count}){tail}"


def _rng(seed: int, suite: str):
    return np.random.default_rng([int(seed), SUITE_ORDER.index(suite)])


def _random_line(rng):
    from .line_geometry import OrientedLine

    return OrientedLine(2.0 * rng.normal(size=3), rng.normal(size=3))


# ----------------------------------------------------------------------------

def suite_line(seed: int) -> list[PropertyResult]:
    from .line_geometry import DualNumber, dual_dot, from_study, line_invariants, to_study

    rng = _rng(seed, "line")
    out = []
    n = 1000
    pairs = [(_random_line(rng), _random_line(rng)) for _ in range(n)]
    shifts = rng.uniform(-5, 5, size=(n, 2))

    worst = 0.0
    for (L0, L1), (a, b) in zip(pairs, shifts):
        h = line_invariants(L0, L1)[1]
        h2 = line_invariants(L0.reanchored(a), L1.reanchored(b))[1]
        worst = max(worst, abs(h - h2))
    out.append(PropertyResult("line", "h is anchor independent", worst < 1e-10, n, f"max change {worst:.2e}"))

    worst = 0.0
    for L0, L1 in pairs:
        d = dual_dot(to_study(L0), to_study(L1))
        g, h = line_invariants(L0, L1)
        worst = max(worst, abs(d.real - g), abs(d.dual - h))
    out.append(PropertyResult("line", "dual_dot equals (g, h)", worst < 1e-12, n, f"max error {worst:.2e}"))

    worst = 0.0
    for L0, _ in pairs:
        xi = to_study(L0)
        d = xi.dot(xi)
        worst = max(worst, abs(d.real - 1.0), abs(d.dual))
        back = to_study(from_study(xi))
        worst = max(worst, float(np.max(np.abs(back.dual_part - xi.dual_part))))
    out.append(PropertyResult("line", "Study sphere xi.xi = 1 + 0 eps", worst < 1e-12, n, f"max error {worst:.2e}"))

    worst_g = worst_h = worst_rev = 0.0
    for L0, L1 in pairs:
        g01, h01 = line_invariants(L0, L1)
        g10, h10 = line_invariants(L1, L0)
        gr, hr = line_invariants(L0.reversed(), L1)
        worst_g = max(worst_g, abs(g01 - g10))
        worst_h = max(worst_h, abs(h01 - h10))
        worst_rev = max(worst_rev, abs(gr + g01), abs(hr + h01))
    out.append(PropertyResult("line", "g symmetric under swap", worst_g < 1e-12, n, f"max {worst_g:.2e}"))
    out.append(PropertyResult("line", "h symmetric under swap", worst_h < 1e-12, n, f"max {worst_h:.2e}"))
    out.append(PropertyResult("line", "reversing one line negates g and h", worst_rev < 1e-12, n,
                              f"max {worst_rev:.2e}"))

    bad = 0
    for _ in range(n):
        b, d = rng.normal(size=2)
        prod = DualNumber(0.0, b) * DualNumber(0.0, d)
        bad += prod.real != 0.0 or prod.dual != 0.0
    out.append(PropertyResult("line", "eps^2 = 0 exactly", bad == 0, n, f"{bad} non-zero products"))
    return out


def suite_strip(seed: int) -> list[PropertyResult]:
    from .constructions import smooth_family
    from .strip_model import (FlatMoebius, FlatPoint, PreBend, centerline_crossings, cut_along, develop,
                              dumps_strip, loads_strip, trim, validate_foliation)

    rng = _rng(seed, "strip")
    out = []
    n = 1000
    bad = 0
    worst = 0.0
    for _ in range(n):
        lam = rng.uniform(0.5, 4.0)
        band = FlatMoebius(lam)
        xb = rng.uniform(0, lam)
        t = rng.uniform(-0.999, 0.999) * lam
        pb = PreBend(FlatPoint(xb, 0.0), FlatPoint(xb + t, 1.0))
        bad += centerline_crossings(pb, band) != 1
        trap = cut_along(band, pb)
        worst = max(worst, abs(trap.len_H + trap.len_D - 2 * lam) / lam,
                    abs(trap.len_D - 2 * trap.t - trap.len_H) / lam)
    out.append(PropertyResult("strip", "every pre-bend crosses the centerline once", bad == 0, n, f"{bad} failures"))
    out.append(PropertyResult("strip", "cut_along length identities", worst < 1e-12, n, f"max rel error {worst:.2e}"))

    strip = smooth_family(0.2)
    rep = validate_foliation(strip)
    out.append(PropertyResult("strip", "smoothed strip is a valid bend foliation", rep.ok, strip.n, rep.summary()))

    worst = 0.0
    worst_scale = 0.0
    trials = 5
    for _ in range(trials):
        e1, e2 = rng.uniform(0.01, 0.2, size=2)
        e = (1 - (1 - 2 * e1) * (1 - 2 * e2)) / 2
        a = trim(trim(strip, e1), e2)
        b = trim(strip, e)
        worst = max(worst, float(np.max(np.abs(a.pre - b.pre))), float(np.max(np.abs(a.bends - b.bends))))
        worst_scale = max(worst_scale, abs(b.lam - strip.lam / (1 - 2 * e)) / b.lam)
    out.append(PropertyResult("strip", "trim composes multiplicatively", worst < 1e-10, trials, f"max {worst:.2e}"))
    out.append(PropertyResult("strip", "trim rescales lambda by 1/(1-2 eps)", worst_scale < 1e-12, trials,
                              f"max rel {worst_scale:.2e}"))

    dev = develop(strip)
    out.append(PropertyResult("strip", "develop recovers the flat layout", dev.round_trip_error < 1e-5, strip.n,
                              f"round trip {dev.round_trip_error:.2e}"))

    back = loads_strip(dumps_strip(strip))
    same = np.array_equal(back.pre, strip.pre) and np.array_equal(back.bends, strip.bends) and back.lam == strip.lam
    out.append(PropertyResult("strip", "strip JSON round trip is exact", bool(same), 1))
    return out


def suite_tpattern(seed: int) -> list[PropertyResult]:
    from .constructions import smooth_family
    from .t_pattern import BendField, LineFamily, find_t_pattern, grid_oracle, lemma_tt_solve, meridian_winding

    rng = _rng(seed, "tpattern")
    out = []
    strip = smooth_family(0.1)
    bf = BendField(strip)
    two_pi = 2 * math.pi

    n = 500
    x0 = rng.uniform(0, two_pi, n)
    x1 = x0 + rng.uniform(1e-3, two_pi - 1e-3, n)
    g, h = bf.F(x0, x1)
    gs, hs = bf.F(x1, x0 + two_pi)
    worst = float(max(np.max(np.abs(gs + g)), np.max(np.abs(hs + h))))
    out.append(PropertyResult("tpattern", "F(swap) = -F", worst < 1e-10, n, f"max {worst:.2e}"))

    k = 20
    ok = 0
    phis = np.geomspace(0.1, 1e-4, 10)
    for theta in rng.uniform(0, two_pi, k):
        gn, hn = bf.F_sphere(np.full(10, theta), phis)
        gsouth, hsouth = bf.F_sphere(np.full(10, theta), math.pi - phis)
        trend = (np.all(np.diff(1 - gn) <= 1e-15) and np.all(np.diff(np.abs(hn)) <= 1e-15)
                 and np.all(np.diff(1 + gsouth) <= 1e-15) and np.all(np.diff(np.abs(hsouth)) <= 1e-15))
        ok += bool(trend and gn[-1] > 1 - 1e-6 and gsouth[-1] < -1 + 1e-6 and abs(hn[-1]) < 1e-3
                   and abs(hsouth[-1]) < 1e-3)
    out.append(PropertyResult("tpattern", "pole limits (1,0) and (-1,0)", ok == k, k, f"{k - ok} failures"))

    k = 8
    ok_half = ok_opp = 0
    for theta in rng.uniform(0, math.pi, k):
        (ca, _), (cb, _) = meridian_winding(bf, theta), meridian_winding(bf, theta + math.pi)
        ok_half += ca.half_integral and cb.half_integral
        ok_opp += abs(ca.w + cb.w) < 1e-6
    out.append(PropertyResult("tpattern", "meridian windings are half-integral", ok_half == k, k))
    out.append(PropertyResult("tpattern", "antipodal meridians have opposite winding", ok_opp == k, k))

    pat = find_t_pattern(strip)
    good = pat.carriers_ok() and pat.min_distance > 0
    out.append(PropertyResult("tpattern", "T-pattern carriers perpendicular and meeting, bends disjoint", good, 1,
                              f"|g|={abs(pat.residual_g):.1e} |h|={abs(pat.residual_h):.1e} "
                              f"dist={pat.min_distance:.4f}"))

    k = 20
    ok = 0
    for _ in range(k):
        fam = LineFamily.random(rng, "screw")
        res = lemma_tt_solve(fam)
        from .t_pattern import FunctionLineField

        _, _, best, cell = grid_oracle(FunctionLineField(fam, fam.vectorized), n=1000)
        ok += res.residual <= max(best, 1e-9)
    out.append(PropertyResult("tpattern", "TT solver beats the 10^6-point grid oracle", ok == k, k,
                              f"{k - ok} failures"))
    return out


def suite_bound(seed: int) -> list[PropertyResult]:
    from .bound import (SQRT3, T0, TriangleInstance, alpha, beta, crossing_point, lower_bound_value,
                        minimize_bound, vee_length, vee_lower_bound)

    rng = _rng(seed, "bound")
    out = []
    n = 10_000
    t = np.sort(rng.uniform(0, 10, size=(n, 2)), axis=1)
    t = t[t[:, 0] < t[:, 1]]
    va = int(np.sum(alpha(t[:, 0]) >= alpha(t[:, 1])))
    vb = int(np.sum(beta(t[:, 0]) <= beta(t[:, 1])))
    out.append(PropertyResult("bound", "alpha strictly increasing", va == 0, len(t), f"{va} violations"))
    out.append(PropertyResult("bound", "beta strictly decreasing", vb == 0, len(t), f"{vb} violations"))

    roots = crossing_point(-10, 10)
    ok = len(roots) == 1 and abs(roots[0] - T0) < 1e-9
    where = f"crossing at {roots[0]:.10f}" if roots else "no crossing"
    out.append(PropertyResult("bound", "alpha - beta changes sign once", ok, len(roots), where))

    x, fx = minimize_bound(0.0, 2.0)
    ok = abs(x - T0) < 1e-9 and abs(fx - SQRT3) < 1e-12 and abs(alpha(T0) - 2 * SQRT3) < 1e-12 \
        and abs(beta(T0) - 2 * SQRT3) < 1e-12
    out.append(PropertyResult("bound", "minimum of the bound is sqrt(3) at 1/sqrt(3)", ok, 1,
                              f"t*={x:.10f} value={fx:.10f}"))

    n = 100_000
    below = near_bad = near = 0
    kinds = rng.integers(0, 3, n)
    ts = rng.uniform(-3, 3, n)
    hs = np.where(kinds == 0, 1.0 + rng.exponential(1.0, n), 1.0)
    for kind, tt, hh, u in zip(kinds, ts, hs, rng.uniform(-1, 2, n)):
        base = math.hypot(1.0, tt)
        off = base / 2 if kind == 2 else u * base
        tri = TriangleInstance(base, hh, off)
        gap = vee_length(tri) - vee_lower_bound(tt, hh)
        below += gap < -1e-12
        if gap <= 1e-9:
            near += 1
            near_bad += not (abs(off - base / 2) < 1e-6 and abs(hh - 1) < 1e-6)
    out.append(PropertyResult("bound", "vee length >= sqrt(5 + t^2)", below == 0, n, f"{below} violations"))
    out.append(PropertyResult("bound", "near-equality only for isosceles, h = 1", near_bad == 0, near,
                              f"{near_bad} exceptions"))

    ts = rng.uniform(-5, 5, 10_000)
    lb = np.maximum(alpha(ts), beta(ts)) / 2
    bad = int(np.sum(lb < SQRT3 - 1e-12))
    out.append(PropertyResult("bound", "lower bound >= sqrt(3)", bad == 0, len(ts), f"{bad} violations"))
    close = abs(lower_bound_value(T0) - SQRT3) < 1e-12
    out.append(PropertyResult("bound", "lower bound attains sqrt(3) at 1/sqrt(3)", close, 1))
    return out


def limit_records(eps_values, threads: int = 1):
    """Convergence records of the smoothed family, one per ``eps``."""
    from .constructions import convergence_record, smooth_family

    def one(e):
        return convergence_record(smooth_family(e), e)

    eps_values = list(eps_values)
    if threads > 1 and len(eps_values) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(one, eps_values))
    return [one(e) for e in eps_values]


def suite_limit(seed: int, threads: int = 1) -> list[PropertyResult]:
    from .bound import SQRT3
    from .constructions import pl_mesh, smooth_layout, triangular_band

    out = []
    band = triangular_band()
    V, _ = pl_mesh(band)
    c = V.mean(axis=0)
    _, sv, vt = np.linalg.svd(V - c)
    planar = sv[-1] < 1e-12
    corners = np.array([band.labels[k] for k in ("P", "Q", "A")])
    sides = [np.linalg.norm(corners[i] - corners[(i + 1) % 3]) for i in range(3)]
    d_corner = max(float(np.min(np.linalg.norm(corners - v, axis=1))) for v in V)
    equi = max(abs(s - 2 / SQRT3) for s in sides) < 1e-12 and d_corner < 1e-12
    out.append(PropertyResult("limit", "PL band image is planar", planar, len(V), f"sv={sv[-1]:.1e}"))
    out.append(PropertyResult("limit", "PL band image is equilateral of side 2/sqrt(3)", equi, 3))
    cont = band.continuity_error()
    glue = band.boundary_identification_error()
    out.append(PropertyResult("limit", "PL pieces agree on shared edges", max(cont, glue) < 1e-12, 3,
                              f"max {max(cont, glue):.1e}"))

    eps = (0.2, 0.1, 0.05, 0.02, 0.01)
    gaps = [smooth_layout(e).lam - SQRT3 for e in eps]
    ok = all(0 < g <= 4 * e for g, e in zip(gaps, eps)) and all(np.diff(gaps) < 0)
    out.append(PropertyResult("limit", "lambda(eps) -> sqrt(3) with gap <= 4 eps", ok, len(eps)))

    recs = limit_records((0.2, 0.1, 0.05), threads)
    sup = [r.sup_distance for r in recs]
    out.append(PropertyResult("limit", "sup distance to the PL band decreases", bool(np.all(np.diff(sup) < 0)),
                              len(recs), " ".join(f"{v:.4f}" for v in sup)))
    last = recs[-1]
    h_ok = max(abs(last.H1 - 1 / SQRT3), abs(last.H2 - 1 / SQRT3)) <= 0.02
    d_ok = max(abs(last.D1 - 2 / SQRT3), abs(last.D2 - 2 / SQRT3)) <= 0.02
    out.append(PropertyResult("limit", "H lengths -> 1/sqrt(3) at eps=0.05", h_ok, 2,
                              f"H1={last.H1:.6f} H2={last.H2:.6f}"))
    out.append(PropertyResult("limit", "D lengths -> 2/sqrt(3) at eps=0.05", d_ok, 2,
                              f"D1={last.D1:.6f} D2={last.D2:.6f}"))
    t_ok = all(abs(r.t - 1 / SQRT3) <= 0.05 * (1 + 10 * r.eps) for r in recs)
    out.append(PropertyResult("limit", "found t near 1/sqrt(3)", t_ok, len(recs),
                              " ".join(f"{r.t:.6f}" for r in recs)))
    lb_ok = all(SQRT3 - 1e-12 <= r.lower_bound < r.lam for r in recs)
    out.append(PropertyResult("limit", "sqrt(3) <= lower_bound(t) < lambda", lb_ok, len(recs)))
    return out


def suite_asymptotic(seed: int) -> list[PropertyResult]:
    from .asymptotic import (connector_experiment, cone, cylinder, gauss_sample, parabolic_cylinder,
                             random_developable, sphere, trace_asymptotic)
    from .errors import NormalizationFailed

    rng = _rng(seed, "asymptotic")
    out = []
    k = 20
    straight = normal = frame = 0
    worst_dev = worst_ang = worst_frame = 0.0
    for _ in range(k):
        patch = random_developable(rng)
        r, a = 0.4 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)
        p0 = np.array([r * math.cos(a), r * math.sin(a)])
        tr = trace_asymptotic(patch, p0, step=0.01, max_len=0.4)
        dev, ang = tr.chord_deviation(), tr.normal_spread()
        worst_dev, worst_ang = max(worst_dev, dev), max(worst_ang, ang)
        straight += dev <= 1e-6
        normal += ang <= 1e-6
        gsam = gauss_sample(patch, p0)
        B = np.array([gsam.v, gsam.w, gsam.n])
        err = float(np.max(np.abs(B @ B.T - np.eye(3))))
        worst_frame = max(worst_frame, err)
        frame += err < 1e-9
    out.append(PropertyResult("asymptotic", "traces on developable patches are straight", straight == k, k,
                              f"max rel deviation {worst_dev:.1e}"))
    out.append(PropertyResult("asymptotic", "normal constant along traces", normal == k, k,
                              f"max angle {worst_ang:.1e}"))
    out.append(PropertyResult("asymptotic", "Gauss sample frames orthonormal", frame == k, k,
                              f"max error {worst_frame:.1e}"))

    pres = [(cylinder(), (0.1, 0.3)), (cone(), (0.5, 0.2)), (parabolic_cylinder(1.0), (0.5, 0.0))]
    worst = max(trace_asymptotic(p, q, 0.01, 0.5).chord_deviation() for p, q in pres)
    out.append(PropertyResult("asymptotic", "preset traces straight", worst <= 1e-6, len(pres), f"max {worst:.1e}"))

    neg = trace_asymptotic(sphere(), (0.1, 0.2), 0.01, 0.5).chord_deviation()
    out.append(PropertyResult("asymptotic", "sphere negative control bends", neg >= 1e-3, 1, f"deviation {neg:.3e}"))

    v = gauss_sample(parabolic_cylinder(1.0), (0.0, 0.0)).v
    ang = math.acos(min(1.0, abs(float(v[0]))))
    out.append(PropertyResult("asymptotic", "kernel at the origin of F=y^2 is (1,0,0)", ang < 1e-6, 1,
                              f"angle {ang:.1e}"))

    s_cone = connector_experiment(cone(), delta=0.05)
    s_cyl = connector_experiment(parabolic_cylinder(0.15), delta=0.05)
    out.append(PropertyResult("asymptotic", "connector expansion below 3", s_cone.below_three and s_cyl.below_three,
                              s_cone.n_pairs + s_cyl.n_pairs,
                              f"cone {s_cone.max_ratio:.6f} cylinder {s_cyl.max_ratio:.6f}"))
    try:
        connector_experiment(parabolic_cylinder(1.0))
        raised = False
    except NormalizationFailed:
        raised = True
    out.append(PropertyResult("asymptotic", "steep patch fails normalization", raised, 1))
    return out


SUITES = {
    "line": suite_line,
    "strip": suite_strip,
    "tpattern": suite_tpattern,
    "bound": suite_bound,
    "limit": suite_limit,
    "asymptotic": suite_asymptotic,
}


def run(suite: str, seed: int, threads: int = 1) -> list[PropertyResult]:
    names = SUITE_ORDER if suite == "all" else (suite,)
    if any(n not in SUITES for n in names):
        raise KeyError(suite)
    results = []
    for name in names:
        fn = SUITES[name]
        results.extend(fn(seed, threads) if name == "limit" else fn(seed))
    return results


def report(results, suite: str, seed: int) -> str:
    n_pass = sum(r.passed for r in results)
    head = [f"# moebiuskit {__version__} verify suite={suite} seed={seed}"]
    body = [r.line() for r in results]
    tail = [f"# {n_pass}/{len(results)} properties passed"]
    return "\n".join(head + body + tail) + "\n"
