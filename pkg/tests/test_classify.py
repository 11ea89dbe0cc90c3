import math

import pytest

from imspec.classify import (L_I, L_II, L_III, NOT_CLASSIFIED, classify,
                             closed_form_pieces, closed_form_spectrum,
                             factor_derivative)
from imspec.errors import NotInRO, PoleInDisk, Unsupported
from imspec.poly import ComplexPoly, RationalFn


def koebe():
    return RationalFn.from_coeffs([0, 1], [1, -2, 1])


def test_factor_koebe_derivative():
    fact = factor_derivative(koebe())
    assert fact.s == 1
    assert abs(fact.on_circle_zeros.roots[0].location - (-1.0)) < 1e-10
    assert fact.cofactor_num.degree == 0
    assert fact.den.degree == 3
    assert fact.reconstruction_error() < 1e-8


def test_factor_r1_no_critical_points():
    fact = factor_derivative(RationalFn.from_coeffs([0, 1], [1, -1]))
    assert fact.s == 0
    assert fact.pi_poly().coeffs == (1 + 0j,)


def test_factor_p2():
    fact = factor_derivative(RationalFn.from_coeffs([0, 1, -0.5]))
    assert fact.s == 1
    assert abs(fact.on_circle_zeros.roots[0].location - 1.0) < 1e-10
    assert abs(fact.cofactor_num.coeffs[0] - (-1.0)) < 1e-12


def test_multiple_circle_critical_point_not_orderly():
    # f' = (1 - z)^2: integrate to z - z^2 + z^3/3
    R = RationalFn.from_coeffs([0, 1, -1, 1 / 3])
    with pytest.raises(NotInRO):
        factor_derivative(R)
    label = classify(R)
    assert label.family == L_I and not label.in_R_O
    with pytest.raises(Unsupported):
        closed_form_spectrum(label, -2.0)


def test_pole_in_disk_rejected():
    with pytest.raises(PoleInDisk):
        classify(RationalFn.from_coeffs([1], [0.5, -1]))  # pole at 0.5


def test_third_order_pole_not_classified():
    R = RationalFn(ComplexPoly((1,)), ComplexPoly.from_roots([1.0, 1.0, 1.0]))
    label = classify(R)
    assert label.family == NOT_CLASSIFIED
    with pytest.raises(Unsupported):
        closed_form_spectrum(label, 1.0)


@pytest.mark.parametrize("num,den,family,s", [
    ([0, 1, -0.5], [1], L_I, 1),
    ([0, 1, 1 / 3], [1, -1], L_II, 1),
    ([0, 1], [1, -2, 1], L_III, 1),
    ([1], [1, -2, 1], L_III, 0),
    ([0, 1], [1, 0, -1], L_II, 2),
])
def test_classify_families(num, den, family, s):
    label = classify(RationalFn.from_coeffs(num, den))
    assert label.family == family
    assert label.s == s


@pytest.mark.parametrize("tau,expected", [
    (-2.0, 1.0), (1.0, 2.0), (0.0, 0.0), (-1.0, 0.0), (1.0 / 3.0, 0.0), (0.4, 0.2),
])
def test_koebe_closed_form(tau, expected):
    label = classify(koebe())
    assert closed_form_spectrum(label, tau) == pytest.approx(expected, abs=1e-12)


def test_r1_closed_form_zero_for_negative():
    label = classify(RationalFn.from_coeffs([0, 1], [1, -1]))
    assert closed_form_spectrum(label, -2.0) == 0.0
    assert closed_form_spectrum(label, 2.0) == pytest.approx(3.0)


def test_pieces_partition_and_match_endpoints():
    label = classify(koebe())
    pieces = closed_form_pieces(label)
    assert pieces.pieces[0].tau_min == -math.inf
    assert pieces.pieces[-1].tau_max == math.inf
    for left, right in zip(pieces.pieces[:-1], pieces.pieces[1:]):
        assert left.tau_max == right.tau_min
        # adjacent formulas agree where they meet
        assert left.value(left.tau_max) == pytest.approx(right.value(right.tau_min), abs=1e-12)
    for tau in (-5.0, -1.0, -0.3, 0.0, 1 / 3, 0.34, 7.0):
        assert pieces(tau) == closed_form_spectrum(label, tau)


def test_brennan_bound_over_families():
    for num, den in ([0, 1, -0.5], [1]), ([0, 1, 1 / 3], [1, -1]), ([0, 1], [1, -2, 1]):
        label = classify(RationalFn.from_coeffs(num, den))
        assert closed_form_spectrum(label, -2.0) <= 1.0


def test_ray_monotonicity_closed_form():
    label = classify(koebe())
    for tau0 in (-1.0, -2.5):
        vals = [closed_form_spectrum(label, tau0 * (1 + t)) for t in (0, 0.2, 0.5, 1.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
    lab2 = classify(RationalFn.from_coeffs([0, 1, 1 / 3], [1, -1]))
    vals = [closed_form_spectrum(lab2, 0.75 * (1 + t)) for t in (0, 0.3, 0.6)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_spectrum_against_known_universal_values():
    # the class value 3*tau - 1 for double circle poles matches the known
    # universal growth at tau >= 2/5, and no class value ever exceeds it
    from imspec.catalog import reference_universal_spectrum
    label = classify(koebe())
    for tau in (0.4, 1.0, 2.0, 3.0):
        ref = reference_universal_spectrum(tau)
        assert closed_form_spectrum(label, tau) == pytest.approx(ref.value)
    lab_ii = classify(RationalFn.from_coeffs([0, 1, 1 / 3], [1, -1]))
    for tau in (0.5, 1.0, 2.0):
        assert closed_form_spectrum(lab_ii, tau) <= reference_universal_spectrum(tau).value + 1e-12


def test_mixed_double_and_simple_circle_poles():
    # one double and one simple circle pole: family III with l=1, t=1; the
    # positive-side exponent is still driven by the double pole
    den = ComplexPoly.from_roots([1.0, 1.0, -1.0])
    label = classify(RationalFn(ComplexPoly((0, 1)), den))
    assert (label.family, label.l, label.t) == (L_III, 1, 1)
    assert closed_form_spectrum(label, 1.0) == pytest.approx(2.0)
    assert closed_form_spectrum(label, -2.0) == 0.0
