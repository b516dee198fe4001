import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pruwalk.baselines import DirectedModel, baseline_partition
from pruwalk.errors import DegenerateError, NearCriticalWarning, OscillationWarning
from pruwalk.kernel import w_series
from pruwalk.phase import (CRITICAL_POLYNOMIALS, MODELS, asymptotic_height_slope, bivariate_in_z,
                           critical_point, density_finite_difference, fit_linear, fit_power_law,
                           free_energy, get_model, isolate_real_roots, phase_point, pole_location,
                           ratio_estimate, surface_density, transition_height_report,
                           _bivariate_eval)
from pruwalk.walks import WalkFamily, height_statistics

CP = CRITICAL_POLYNOMIALS
# one-sided limit of the density at a = 2 for prudent tails, from implicit
# differentiation of the adsorbed polynomial at (z_1^t, 2)
RHO_TAILS_PLUS = 0.32950180806
RHO_LOOPS_PLUS = 0.150594376


# -- root isolation -------------------------------------------------------------------

def test_tails_desorbed_root():
    roots = isolate_real_roots(CP.tails_desorbed, (0, 1))
    assert len(roots) == 1
    assert roots[0].value == pytest.approx(0.403032, abs=1e-6)


def test_loops_roots():
    (z1,) = isolate_real_roots(CP.loops_desorbed, (0, 1))
    (ac,) = isolate_real_roots(CP.loops_critical_a, (1, 2))
    assert z1.value == pytest.approx(0.412095, abs=1e-6)
    assert ac.value == pytest.approx(1.82476, abs=1e-5)


def test_sqrt_two():
    (r,) = isolate_real_roots([-2, 0, 1], (1, 2))
    assert r.value == pytest.approx(math.sqrt(2), abs=1e-12)
    assert r.hi - r.lo <= Fraction(1, 10 ** 12)


def test_zero_polynomial_rejected():
    with pytest.raises(DegenerateError):
        isolate_real_roots([0, 0], (0, 1))


def test_multiplicity_flagged():
    # (x - 1)^2 (x + 2) = x^3 - 3x + 2
    roots = isolate_real_roots([2, -3, 0, 1])
    assert [(round(r.value, 12), r.multiplicity) for r in roots] == [(-2.0, 1), (1.0, 2)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1, max_size=5,
                unique=True))
def test_isolates_known_rational_roots(rts):
    poly = [Fraction(1)]
    for r in rts:
        poly = [Fraction(0)] + poly
        for k in range(len(poly) - 1):
            poly[k] -= r * poly[k + 1]
    found = isolate_real_roots(poly)
    assert [r.value for r in found] == pytest.approx(sorted(float(r) for r in rts), abs=1e-11)


# -- free energy and density -------------------------------------------------------------

def test_adsorbed_polynomial_factors_at_two():
    assert bivariate_in_z(CP.adsorbed, 2) == [-c for c in CP.tails_desorbed]


def test_free_energy_tails_at_one():
    assert free_energy("prudent_tails", 1.0) == pytest.approx(-math.log(0.403032), abs=1e-5)
    assert free_energy("prudent_tails", 1.0) == pytest.approx(0.90874, abs=1e-5)


def test_loops_polynomials_consistent():
    m = MODELS["prudent_loops"]
    assert abs(_bivariate_eval(CP.adsorbed, m.z_desorbed, m.a_c)) < 1e-6


def test_desorbed_density_zero():
    assert surface_density("prudent_tails", 1.5) == 0.0
    assert surface_density("prudent_loops", 1.2) == 0.0


def test_density_jump_tails():
    assert surface_density("prudent_tails", 2.0, side="+") == pytest.approx(RHO_TAILS_PLUS, abs=1e-10)
    assert surface_density("prudent_tails", 2.0, side="-") == 0.0
    assert surface_density("prudent_tails", 2.0 + 1e-7) == pytest.approx(RHO_TAILS_PLUS, abs=1e-5)


def test_density_at_critical_point_is_two_valued():
    with pytest.warns(NearCriticalWarning):
        assert math.isnan(surface_density("prudent_tails", 2.0))


def test_density_large_fugacity():
    for model in ("prudent_tails", "prudent_loops"):
        assert surface_density(model, 1e6) == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("model", ["prudent_tails", "prudent_loops", "dyck", "motzkin_edge",
                                   "partially_directed_edge"])
def test_density_matches_finite_difference(model):
    m = get_model(model)
    for a in np.linspace(m.a_c + 0.05, m.a_c + 8, 50):
        assert surface_density(m, a) == pytest.approx(density_finite_difference(m, a), abs=1e-6)


def test_critical_points():
    t = critical_point("prudent_tails")
    assert t.a_c == 2.0 and t.jump == pytest.approx(RHO_TAILS_PLUS, abs=1e-10) and t.order == "first"
    assert t.crossing == pytest.approx(2.0, abs=1e-9)
    loops = critical_point("prudent_loops")
    assert loops.a_c == pytest.approx(1.82476, abs=1e-5)
    assert loops.jump == pytest.approx(RHO_LOOPS_PLUS, abs=1e-8) and loops.order == "first"
    d = critical_point("dyck")
    assert d.a_c == 2.0 and d.jump == 0.0 and d.order == "second"


@pytest.mark.parametrize("model", ["prudent_tails", "prudent_loops"])
def test_free_energy_continuous_at_critical_point(model):
    m = get_model(model)
    for eps in (1e-4, 1e-6):
        assert abs(free_energy(m, m.a_c - eps) - free_energy(m, m.a_c + eps)) < 10 * eps


@pytest.mark.parametrize("model", ["prudent_tails", "prudent_loops"])
def test_first_order_signature(model):
    m = get_model(model)
    cp = critical_point(m)
    delta = 1e-7
    slope = (free_energy(m, m.a_c + delta) - free_energy(m, m.a_c)) / delta
    assert slope == pytest.approx(cp.jump / m.a_c, rel=1e-4)


@pytest.mark.parametrize("model", ["prudent_tails", "prudent_loops"])
def test_critical_alpha_between_zero_and_log_mu(model):
    m = get_model(model)
    assert 0 < math.log(m.a_c) < -math.log(m.z_desorbed)


def test_dyck_critical_alpha_equals_log_mu():
    # a Dyck path touches the surface at most every second step
    m = get_model("dyck")
    assert math.log(m.a_c) == pytest.approx(-math.log(m.z_desorbed))


# edge-weighted models whose walks can run along the surface for every step
@pytest.mark.parametrize("model", ["prudent_tails", "prudent_loops", "motzkin_edge",
                                   "partially_directed_edge"])
def test_free_energy_bounds_and_monotone(model):
    m = get_model(model)
    log_mu = -math.log(m.z_desorbed)
    alphas = np.linspace(0, 4, 81)
    fs = [free_energy(m, math.exp(al)) for al in alphas]
    assert all(f2 >= f1 - 1e-12 for f1, f2 in zip(fs, fs[1:]))
    assert all(f >= max(log_mu, al) - 1e-9 for f, al in zip(fs, alphas))


def test_phase_point():
    p = phase_point("prudent_tails", 3.0)
    assert p.phase == "adsorbed" and p.rho > 0 and p.alpha == pytest.approx(math.log(3))
    assert phase_point("prudent_tails", 1.0).phase == "desorbed"


def test_bad_fugacity():
    with pytest.raises(ValueError):
        free_energy("prudent_tails", 0.0)


# -- generating-function poles ---------------------------------------------------------------

def test_poles_are_desorbed_roots():
    assert pole_location("prudent_tails") == pytest.approx(MODELS["prudent_tails"].z_desorbed, abs=1e-12)
    assert pole_location("prudent_loops") == pytest.approx(MODELS["prudent_loops"].z_desorbed, abs=1e-12)


def test_height_increments_approach_asymptotic_slope():
    tails = height_statistics(WalkFamily("two_sided", "tail"), 200)
    loops = height_statistics(WalkFamily("two_sided", "loop"), 200)
    for series, model in ((tails.mean_endpoint, "prudent_tails"), (loops.mean_max, "prudent_loops")):
        slope = asymptotic_height_slope(model)
        assert slope > 0
        # mean increments over windows of 40 steps, past the early transient
        inc = [float(series[b] - series[b - 40]) / 40 for b in (120, 160, 200)]
        gaps = [abs(x - slope) for x in inc]
        assert gaps[0] > gaps[1] > gaps[2]


# -- ratio method ---------------------------------------------------------------------------

def test_ratio_geometric():
    est = ratio_estimate([3 ** n for n in range(30)])
    assert est.z_c == pytest.approx(1 / 3, abs=1e-15)


def test_ratio_tails_series():
    est = ratio_estimate(w_series(50, a=1).numbers())
    assert abs(est.z_c / 0.403032 - 1) < 0.01
    assert est.uncertainty > 0


def test_ratio_dyck_loops_uses_even_terms():
    counts = baseline_partition(DirectedModel("dyck", "vertex", "loop"), 100, 1).counts()
    est = ratio_estimate(counts)
    assert est.period == 2
    assert abs(est.z_c / 0.5 - 1) < 0.01


def test_ratio_oscillation_warning():
    coeffs = [(3 + (-1) ** n * 0.5) ** n for n in range(40)]
    with pytest.warns(OscillationWarning):
        ratio_estimate(coeffs)


def test_ratio_needs_enough_terms():
    with pytest.raises(ValueError):
        ratio_estimate([1, 2, 4])


# -- fits ------------------------------------------------------------------------------------

def test_power_law_fit_recovers_exponent():
    ns = np.arange(10, 200)
    fit = fit_power_law(ns, 1.7 * ns ** 0.5 - 1.5)
    assert fit.exponent == pytest.approx(0.5, abs=1e-6)
    assert fit.amplitude == pytest.approx(1.7, abs=1e-5)


def test_linear_fit():
    ns = np.arange(0, 100)
    fit = fit_linear(ns, 0.25 * ns + 3, (20, 60))
    assert fit.slope == pytest.approx(0.25) and fit.residual_norm < 1e-9


# -- transition order against height growth ----------------------------------------------------

@pytest.fixture(scope="module")
def report():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return {r.model: r for r in transition_height_report()}


def test_report_directed_rows(report):
    ne = report["ne_directed_tails"]
    assert ne.gamma == pytest.approx(1.0, abs=1e-3) and ne.transition == "first" and ne.consistent
    dyck = report["dyck_loops"]
    assert dyck.gamma == pytest.approx(0.5, abs=0.02) and dyck.transition == "second" and dyck.consistent
    for name in ("motzkin_loops", "motzkin_tails", "partially_directed_loops",
                 "partially_directed_tails", "dyck_tails"):
        assert report[name].transition == "second" and report[name].consistent


def test_report_prudent_tails(report):
    row = report["prudent_tails"]
    assert row.transition == "first" and row.consistent
    assert row.gamma == pytest.approx(1.0, abs=0.1)


def test_report_prudent_loops_transition(report):
    assert report["prudent_loops"].transition == "first"
