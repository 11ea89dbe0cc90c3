import math

import numpy as np
import pytest

from imspec.catalog import lookup
from imspec.config import DEFAULT
from imspec.errors import ExpansionAtPole
from imspec.ims import (RationalDerivative, branched_log_derivative, closure_defect,
                        coefficient_growth_spectrum, estimate_spectrum,
                        integral_means, power_deformation)
from imspec.oracles import riemann_cross_check
from imspec.poly import RationalFn

KOEBE = RationalDerivative.from_function(RationalFn.from_coeffs([0, 1], [1, -2, 1]))
IDENT = RationalDerivative.from_fprime(RationalFn.from_coeffs([1]))
HALF_PLANE = RationalDerivative.from_fprime(RationalFn.from_coeffs([1], [1, -1]))


def test_branched_log_identity():
    samples = branched_log_derivative(IDENT, 0.5, np.linspace(0, 6.2, 50))
    np.testing.assert_allclose(samples, 0.0, atol=1e-14)


def test_branched_log_koebe_real_axis():
    r = 0.9
    got = branched_log_derivative(KOEBE, r, [0.0])[0]
    want = math.log(1 + r) - 3 * math.log(1 - r)
    assert got.real == pytest.approx(want, abs=1e-10)
    assert got.imag == pytest.approx(0.0, abs=1e-10)


def test_closure_defect_tiny():
    assert closure_defect(KOEBE, 0.9) <= 1e-10


def test_integral_means_tau_zero():
    assert integral_means(KOEBE, 0.0, 0.9) == pytest.approx(2 * math.pi, rel=1e-12)


def test_integral_means_identity_complex_tau():
    assert integral_means(IDENT, 3 + 4j, 0.7) == pytest.approx(2 * math.pi, rel=1e-12)


@pytest.mark.parametrize("r", [0.9, 0.99, 0.999])
def test_integral_means_parseval(r):
    got = integral_means(HALF_PLANE, 2.0, r)
    assert got == pytest.approx(2 * math.pi / (1 - r * r), rel=1e-8)


def test_estimate_koebe_negative_two():
    est = estimate_spectrum(KOEBE, -2.0, k_max=16)
    assert est.spectrum() == pytest.approx(1.0, abs=0.05)
    assert not est.log_regime


def test_estimate_identity_flat():
    est = estimate_spectrum(IDENT, 7.0, k_max=12)
    assert est.spectrum() == pytest.approx(0.0, abs=1e-10)
    assert est.residual < 1e-10


def test_estimate_half_plane_exponent_two():
    est = estimate_spectrum(HALF_PLANE, 2.0, k_max=16)
    assert est.spectrum() == pytest.approx(1.0, abs=0.05)


def test_log_regime_detection():
    est = estimate_spectrum(HALF_PLANE, 1.0, k_max=16)
    assert est.log_regime
    assert est.spectrum() == 0.0
    est = estimate_spectrum(KOEBE, -1.0, k_max=16)
    assert est.log_regime
    # a genuine power of 1/2 must not be mistaken for the log regime
    est = estimate_spectrum(KOEBE, 0.5, k_max=16)
    assert not est.log_regime
    assert est.spectrum() == pytest.approx(0.5, abs=0.05)


def test_ladder_rows_and_radii():
    est = estimate_spectrum(IDENT, 1.0, k_min=4, k_max=8)
    ks = [p.k for p in est.ladder]
    assert ks == [4, 5, 6, 7, 8]
    assert all(p.r == 1 - 2.0**-p.k for p in est.ladder)
    assert est.ladder[0].abscissa == pytest.approx(4 * math.log(2))


def test_affine_invariance_of_slope():
    k = lookup("koebe")
    scaled = RationalDerivative.from_function(k.rational.scale(3.0 - 2.0j))
    s1 = estimate_spectrum(k.derivative, -2.0, k_max=10).slope
    s2 = estimate_spectrum(scaled, -2.0, k_max=10).slope
    assert abs(s1 - s2) <= 1e-10


def test_cross_oracle_riemann():
    cfg = DEFAULT
    for name in ("koebe", "R1", "R2", "P2", "E1"):
        d = lookup(name).derivative
        a = integral_means(d, -2.0 if name != "E1" else 2.0, 0.99, cfg)
        b = riemann_cross_check(d, -2.0 if name != "E1" else 2.0, 0.99)
        assert abs(a - b) / a < 1e-6, name


def test_monotone_ray_trend_numeric():
    slopes = [estimate_spectrum(KOEBE, -2.0 * (1 + t), k_max=14).spectrum()
              for t in (0.0, 0.25, 0.5)]
    for a, b in zip(slopes, slopes[1:]):
        assert b >= a - 0.05


def test_deformation_matches_shifted_exponent():
    F = power_deformation(KOEBE, 0.5)
    est_f = estimate_spectrum(F, -2.0, k_max=14)
    est_k = estimate_spectrum(KOEBE, -3.0, k_max=14)
    assert abs(est_f.spectrum() - est_k.spectrum()) <= 0.07
    assert est_f.spectrum() == pytest.approx(2.0, abs=0.07)


def test_deformed_branch_scaling():
    F = power_deformation(KOEBE, 0.5)
    grid = np.linspace(0, 6.0, 17)
    base = branched_log_derivative(KOEBE, 0.8, grid)
    np.testing.assert_allclose(branched_log_derivative(F, 0.8, grid), 1.5 * base, rtol=1e-12)


def test_coefficient_growth_koebe():
    fp = lookup("koebe").rational.derivative()
    est = coefficient_growth_spectrum(fp, 1.0, N=2048)
    assert est.value == pytest.approx(2.0, abs=0.05)
    est = coefficient_growth_spectrum(fp, -2.0, N=2048)
    assert est.value == pytest.approx(1.0, abs=0.05)


def test_coefficient_growth_identity_degenerate():
    est = coefficient_growth_spectrum(RationalFn.from_coeffs([1]), 3.0, N=512)
    assert est.degenerate
    assert est.value == 0.0


def test_coefficient_growth_pole_at_origin():
    with pytest.raises(ExpansionAtPole):
        coefficient_growth_spectrum(RationalFn(RationalFn.from_coeffs([1], [0, 1]).num,
                                               RationalFn.from_coeffs([1], [0, 1]).den,
                                               reduce=False), 1.0, N=512)


def test_estimator_matches_closed_forms_spotcheck():
    from imspec.classify import classify, closed_form_spectrum
    for name, tau in (("koebe2", 1.0), ("P5", -2.0)):
        entry = lookup(name)
        want = closed_form_spectrum(classify(entry.rational), tau)
        est = estimate_spectrum(entry.derivative, tau, k_max=14)
        assert est.spectrum() == pytest.approx(want, abs=0.05), name


def test_quadrature_budget_exceeded():
    from imspec.errors import QuadratureBudgetExceeded
    with pytest.raises(QuadratureBudgetExceeded):
        integral_means(KOEBE, -2.0, 1 - 2.0**-12, panel_budget=4)


def test_branch_tracking_fails_on_winding():
    # a derivative with a zero inside the claimed annulus winds the argument
    from imspec.errors import BranchTrackingFailed
    from imspec.ims import FormulaDerivative
    bad = FormulaDerivative("bad", lambda z: z - 0.5, lambda z: 1.0 / (z - 0.5), (), 0.0)
    with pytest.raises(BranchTrackingFailed):
        branched_log_derivative(bad, 0.9, [0.0, 1.0])


def test_radius_outside_annulus_rejected():
    with pytest.raises(ValueError):
        integral_means(KOEBE, 1.0, 1.5)
    bad_inner = power_deformation(KOEBE, 0.0)
    with pytest.raises(ValueError):
        branched_log_derivative(bad_inner, -0.1, [0.0])
