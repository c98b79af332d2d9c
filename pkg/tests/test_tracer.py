import math

import numpy as np
import pytest

from asymdir.charges import in_domain, validate
from asymdir.directions import spectrum, unit_window_roots, variant_comparison, zeroing_form
from asymdir.tracer import (
    TraceParams,
    branch_residuals,
    domain_mask,
    estimate_directions,
    harmonic_demo,
    render_svg,
    trace_and_match,
    trace_zero_curves,
    write_branches_csv,
)

from .conftest import rng_configs, rng_configs_with_L


def test_params_validation():
    with pytest.raises(ValueError, match="invalid annulus"):
        TraceParams(r_min=10, r_max=5)
    with pytest.raises(ValueError):
        TraceParams(delta=0.6)


def test_domain_mask_matches_in_domain():
    cfg = validate([(1, 1, 2), (-2, "-1/2", 0)])
    rng = np.random.default_rng(0)
    pts = rng.uniform(-40, 40, size=(400, 2))
    for dom in ("I", "II"):
        mask = domain_mask(cfg, pts[:, 0], pts[:, 1], 0.1, dom)
        assert list(mask) == [in_domain(p, cfg, 0.1, dom) for p in pts]


def test_single_charge(single):
    br = trace_zero_curves(single, "X", TraceParams(), "I")
    assert len(br) == 2
    assert {math.copysign(1, b.points[0][1]) for b in br} == {-1.0, 1.0}
    est, notes = estimate_directions(br, spectrum(single))
    assert all(e.matched_root == 0.0 and abs(e.slope) < 1e-12 for e in est)
    assert trace_zero_curves(single, "Y", TraceParams(), "I") == []


def test_branch_invariants(dipole):
    p = TraceParams()
    for b in trace_zero_curves(dipole, "X", p, "I"):
        assert b.reached_r_max
        assert branch_residuals(dipole, b).max() <= p.refine_tol
        pts = np.asarray(b.points)
        steps = np.hypot(*np.diff(pts, axis=0).T)
        radii = np.hypot(pts[:-1, 0], pts[:-1, 1])
        assert np.all(steps <= 2 * p.step * radii)


def test_step_halving_is_stable(dipole):
    sp_ = spectrum(dipole)
    a = trace_and_match(dipole, "X", "I", sp_, TraceParams())
    b = trace_and_match(dipole, "X", "I", sp_, TraceParams(step=0.01))
    assert len(a.branches) == len(b.branches) == 4
    for ea, eb in zip(a.estimates, b.estimates):
        assert abs(ea.slope - eb.slope) < 1e-6


def test_slopes_stable_under_annulus_doubling():
    for cfg in rng_configs_with_L(4, 3):
        sp_ = spectrum(cfg)
        a = trace_and_match(cfg, "X", "I", sp_, TraceParams())
        b = trace_and_match(cfg, "X", "I", sp_, TraceParams(r_min=2e3, r_max=2e4))
        sa = sorted(e.slope for e in a.estimates)
        sb = sorted(e.slope for e in b.estimates)
        assert len(sa) == len(sb)
        unc = max([e.uncertainty for e in a.estimates + b.estimates], default=0.0)
        assert all(abs(u - v) <= unc + 1e-9 for u, v in zip(sa, sb))


def test_symmetric_configs_give_slope_pairs():
    for cfg in rng_configs(4, 8, M_max=3, special_case=True):
        res = trace_and_match(cfg, "X", "I", spectrum(cfg))
        slopes = sorted(e.slope for e in res.estimates)
        unc = max([e.uncertainty for e in res.estimates], default=0.0)
        for s, r in zip(slopes, reversed(slopes)):
            assert abs(s + r) <= 2 * unc + 1e-9


def test_branches_match_spectrum():
    for cfg in rng_configs_with_L(5, 17):
        sp_ = spectrum(cfg)
        for comp in ("X", "Y"):
            for dom in ("I", "II"):
                res = trace_and_match(cfg, comp, dom, sp_)
                assert all(e.matched and e.distance <= 1e-3 for e in res.estimates)


def _variant_roots(cfg, variant):
    out = {}
    for comp in ("X", "Y"):
        for dom in ("I", "II"):
            roots, zero = unit_window_roots(zeroing_form(cfg, comp, dom, variant).numerator)
            out[(comp, dom)] = [iv.midpoint for iv in roots] + ([0.0] if zero else [])
    return out


def test_matching_distinguishes_variants():
    cfg = validate([(1, 1, "1/2"), (-1, "-1/3", 1)])
    assert not variant_comparison(cfg, "X", "I").nonzero_root_sets_equal
    unmatched = {}
    for variant in ("authoritative", "paper_closed"):
        roots = _variant_roots(cfg, variant)
        res = trace_and_match(cfg, "X", "I", roots, TraceParams(max_refinements=0))
        unmatched[variant] = sum(not e.matched for e in res.estimates)
    assert unmatched["authoritative"] == 0 < unmatched["paper_closed"]


def test_harmonic_demo():
    h = harmonic_demo(5, 3, 4)
    assert h["harmonic"]
    assert all(3.5 <= r <= 4.5 for r in h["convergence_ratios"])
    assert h["hessian_max_relative"] <= 1e-8
    assert h["Uz_on_z0_max"] == 0.0
    assert h["grad_xy_on_plane_max"] < 1e-10
    bad = harmonic_demo(1, 1, 1)
    assert not bad["harmonic"]
    assert bad["max_laplacian_over_U"] >= 0.5
    assert bad["hessian_max_relative"] <= 1e-8
    with pytest.raises(ValueError):
        harmonic_demo(5, 3, 4, grid_n=2)


def test_emitters_are_deterministic(tmp_path, dipole):
    br = trace_zero_curves(dipole, "X", TraceParams(), "I")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_branches_csv(br, a)
    write_branches_csv(br, b)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "branch_id,component,domain,x,y"
    svg = render_svg(br, [-0.7071, 0.7071], "I", 3e3, 3e4)
    assert svg == render_svg(br, [-0.7071, 0.7071], "I", 3e3, 3e4)
    assert svg.startswith("<svg") and svg.count("<polyline") == 6
