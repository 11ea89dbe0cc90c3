import math

import numpy as np
import pytest

from imspec.catalog import (KNOWN_EXACT, KNOWN_LOWER, KRAETZER,
                            boundary_selfintersection_probe, list_names,
                            load_catalog, lookup, reference_universal_spectrum)
from imspec.classify import classify, closed_form_spectrum
from imspec.errors import UnknownEntry
from imspec.ims import estimate_spectrum
from imspec.schwarzian import pre_schwarzian, weighted_sup_norm


def test_lookup_known_entries():
    k = lookup("koebe")
    assert k.is_rational and k.univalent
    assert k.expected["family"]["value"] == "L_III"
    assert lookup("P2").expected["family"]["s"] == 1
    with pytest.raises(UnknownEntry):
        lookup("nope")


def test_list_names_covers_required_set():
    names = list_names()
    for needed in ("identity", "P2", "E2", "P3", "P5", "bigP", "R1", "R2", "R3",
                   "koebe", "koebe2", "E1", "spiral"):
        assert needed in names


def test_every_expected_classification_rederives():
    for name, entry in sorted(load_catalog().items()):
        fam = entry.expected.get("family")
        if fam is None or not entry.is_rational:
            continue
        label = classify(entry.rational)
        assert label.family == fam["value"], name
        assert label.s == fam["s"], name
        assert label.l == fam["l"], name
        assert label.t == fam["t"], name


def test_every_expected_spectrum_rederives():
    for name, entry in sorted(load_catalog().items()):
        if not entry.is_rational:
            continue
        label = classify(entry.rational)
        for fact in entry.expected.get("spectrum", []):
            got = closed_form_spectrum(label, fact["tau"])
            assert got == pytest.approx(fact["value"], abs=1e-12), (name, fact)


def test_expected_critical_angles_rederive():
    from imspec.classify import factor_derivative
    for name, entry in sorted(load_catalog().items()):
        fact = entry.expected.get("critical_angles")
        if fact is None or not entry.is_rational:
            continue
        zeros = factor_derivative(entry.rational).on_circle_zeros
        got = sorted(math.atan2(r.location.imag, r.location.real) % (2 * math.pi)
                     for r in zeros)
        assert got == pytest.approx(fact["value"], abs=fact["tol"]), name


def test_expected_schwarzian_norms_rederive():
    for name, entry in sorted(load_catalog().items()):
        fact = entry.expected.get("schwarzian_norm")
        if fact is None:
            continue
        val = weighted_sup_norm(entry.schwarzian_phi, 2).value
        assert val == pytest.approx(fact["value"], abs=fact["tol"]), name


def test_expected_preschwarzian_norm_rederives():
    entry = lookup("koebe")
    fact = entry.expected["preschwarzian_norm"]
    val = weighted_sup_norm(pre_schwarzian(entry.rational), 1).value
    assert val == pytest.approx(fact["value"], abs=fact["tol"])


@pytest.mark.slow
def test_expected_numeric_spectra_rederive():
    for name, entry in sorted(load_catalog().items()):
        for fact in entry.expected.get("numeric_spectrum", []):
            est = estimate_spectrum(entry.derivative, fact["tau"], k_max=14)
            assert est.spectrum() == pytest.approx(fact["value"], abs=fact["tol"]), (name, fact)


def test_derivative_evaluator_matches_symbolic_derivative():
    rng = np.random.default_rng(11)
    z = 0.75 * np.sqrt(rng.uniform(0.1, 1, 100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    for name, entry in sorted(load_catalog().items()):
        if not entry.is_rational:
            continue
        d = entry.rational.derivative()
        sym = d.num(z) / d.den(z)
        got = entry.derivative.fprime(z)
        assert np.max(np.abs(got - sym)) < 1e-10, name


def test_rational_and_formula_twins_agree():
    z = 0.8 * np.exp(1j * np.linspace(0.0, 6.28, 257))
    a = lookup("koebe2").derivative.fprime(z)
    b = lookup("koebeT2").derivative.fprime(z)
    assert np.max(np.abs(a - b)) < 1e-12


def test_reference_spectrum_exact_values():
    assert reference_universal_spectrum(1.0, KNOWN_EXACT).value == 2.0
    assert reference_universal_spectrum(3.0, KNOWN_EXACT, bounded=True).value == 2.0
    assert reference_universal_spectrum(-2.0, KRAETZER).value == 1.0
    assert reference_universal_spectrum(0.0, KRAETZER).value == 0.0
    assert reference_universal_spectrum(-3.0, KRAETZER).value == 2.0


def test_reference_spectrum_interval_regions():
    ref = reference_universal_spectrum(-2.0, KNOWN_EXACT)
    assert ref.value is None
    assert ref.lower == 1.0 and math.isinf(ref.upper)
    low = reference_universal_spectrum(0.2, KNOWN_LOWER)
    assert low.lower == pytest.approx(0.0)
    assert reference_universal_spectrum(0.39, KNOWN_EXACT).value is None
    assert reference_universal_spectrum(0.41, KNOWN_EXACT).value == pytest.approx(0.23)


def test_probe_finds_bigP_selfcontact():
    probe = boundary_selfintersection_probe(lookup("bigP"))
    assert probe.min_distance < 1e-4
    want = {5 * math.pi / 6, 2 * math.pi - 5 * math.pi / 6}
    assert min(abs(probe.theta_pair[0] - w) for w in want) < 0.01


def test_probe_identity_and_P2_separated():
    assert boundary_selfintersection_probe(lookup("identity")).min_distance > 1e-3
    assert boundary_selfintersection_probe(lookup("P2")).min_distance > 1e-3


def test_probe_rejects_circle_poles():
    with pytest.raises(ValueError):
        boundary_selfintersection_probe(lookup("koebe"))


def test_user_catalog_merge(tmp_path):
    extra = tmp_path / "extra.toml"
    extra.write_text('''
[[entry]]
name = "cayley"
kind = "rational"
num = [[0.0, 0.0], [1.0, 0.0]]
den = [[1.0, 0.0], [-0.5, 0.0]]
univalent = true
univalent_provenance = "Moebius map"

[entry.expected.family]
value = "L_I"
s = 0
l = 0
t = 0
provenance = "pole at z = 2 is outside the closed disk"
''')
    entry = lookup("cayley", extra_path=str(extra))
    label = classify(entry.rational)
    assert label.family == "L_I" and label.s == 0
