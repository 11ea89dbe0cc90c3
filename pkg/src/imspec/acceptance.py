"""Acceptance criteria as runnable check suites.

Each suite returns CriterionResult rows (one per check, with the measured
value, the expectation, and the tolerance), so the same code backs both the
pytest acceptance module and the ``verify`` command.  Suites: classify,
spectra, norms, bergman, oracles, properties, determinism; ``all`` runs every
suite in a fixed order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import bergman, oracles, serialize
from .catalog import load_catalog, lookup
from .classify import classify, closed_form_spectrum
from .config import DEFAULT, RunConfig
from .ims import RationalDerivative, estimate_spectrum, power_deformation
from .poly import RationalFn
from .schwarzian import (pre_schwarzian, pre_schwarzian_gap, schwarzian,
                         weighted_sup_norm)

SUITE_NAMES = ("classify", "spectra", "norms", "bergman", "oracles",
               "properties", "determinism")


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    name: str
    passed: bool
    measured: object
    expected: object
    tol: Optional[float] = None

    def to_jsonable(self):
        return {"cid": self.cid, "name": self.name, "passed": self.passed,
                "measured": self.measured, "expected": self.expected,
                "tol": self.tol}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tol = "" if self.tol is None else f" tol={serialize.fmt_float(self.tol)}"
        return (f"{status} {self.cid} {self.name}: measured={self.measured!r} "
                f"expected={self.expected!r}{tol}")


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    results: tuple[CriterionResult, ...]
    passed: bool

    def to_jsonable(self):
        return {"suite": self.suite,
                "results": [r.to_jsonable() for r in self.results],
                "passed": self.passed}


def _close(cid, name, measured, expected, tol) -> CriterionResult:
    ok = abs(measured - expected) <= tol
    return CriterionResult(cid, name, bool(ok), float(measured), float(expected), float(tol))


def _leq(cid, name, measured, bound) -> CriterionResult:
    return CriterionResult(cid, name, bool(measured <= bound), float(measured), float(bound))


def _eq(cid, name, measured, expected) -> CriterionResult:
    return CriterionResult(cid, name, bool(measured == expected), measured, expected)


def _runtime(cid, elapsed: float, budget: float) -> CriterionResult:
    # wall time stays out of the payload so reports are byte-reproducible
    return CriterionResult(cid, f"runtime_within_{budget:g}s", bool(elapsed <= budget),
                           None, f"<= {budget:g} s")


# -- criterion 1: classification ------------------------------------------------

CLASSIFY_EXPECTED = [
    # koebe2 has only simple circle poles, so the pole-order taxonomy puts it
    # in L_II; its two circle critical points +-i give s = 2
    ("identity", "L_I", 0), ("P2", "L_I", 1), ("P3", "L_I", 2), ("P5", "L_I", 2),
    ("bigP", "L_I", 0), ("R1", "L_II", 0), ("R2", "L_II", 1), ("R3", "L_III", 0),
    ("koebe", "L_III", 1), ("koebe2", "L_II", 2),
]


def suite_classify(config: RunConfig = DEFAULT) -> list[CriterionResult]:
    out = []
    t0 = time.perf_counter()
    for name, family, s in CLASSIFY_EXPECTED:
        entry = lookup(name, config)
        label = classify(entry.rational, config)
        out.append(_eq("C1", f"{name}.family", label.family, family))
        out.append(_eq("C1", f"{name}.s", label.s, s))
    p2 = lookup("P2", config).rational
    e2 = lookup("E2", config).rational
    same = p2.num.coeffs == e2.num.coeffs and p2.den.coeffs == e2.den.coeffs
    out.append(_eq("C1", "E2.identical_to_P2", bool(same), True))
    out.append(_runtime("C1", time.perf_counter() - t0, 1.0))
    return out


# -- criteria 2 and 3: closed form vs numeric, and the -2 bound ------------------

SPECTRA_TAUS = (-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0)
SPECTRA_ENTRIES = ("koebe", "R1", "R2", "R3", "P2", "P3")
NEG_TWO_BOUND_ENTRIES = ("identity", "P2", "E2", "P3", "P5", "bigP",
                         "R1", "R2", "R3", "koebe", "koebe2")


def suite_spectra(config: RunConfig = DEFAULT) -> list[CriterionResult]:
    out = []
    t0 = time.perf_counter()
    est_cache: dict = {}

    def estimate(name, tau):
        key = (name, tau)
        if key not in est_cache:
            est_cache[key] = estimate_spectrum(lookup(name, config).derivative,
                                               tau, config, k_max=16)
        return est_cache[key]

    for name in SPECTRA_ENTRIES:
        label = classify(lookup(name, config).rational, config)
        for tau in SPECTRA_TAUS:
            want = closed_form_spectrum(label, tau)
            est = estimate(name, tau)
            out.append(_close("C2", f"{name}.tau={tau:g}", est.spectrum(), want, 0.05))
    for tau, want in ((1.0, 0.0), (2.0, 1.0)):
        est = estimate("E1", tau)
        out.append(_close("C2", f"E1.tau={tau:g}", est.spectrum(), want, 0.05))
    out.append(_runtime("C2", time.perf_counter() - t0, 300.0))

    for name in NEG_TWO_BOUND_ENTRIES:
        label = classify(lookup(name, config).rational, config)
        out.append(_leq("C3", f"{name}.closed_form_at_-2",
                        closed_form_spectrum(label, -2.0), 1.0))
        out.append(_leq("C3", f"{name}.numeric_at_-2",
                        estimate(name, -2.0).spectrum(), 1.05))
    return out


# -- criterion 6: norm saturation -------------------------------------------------


def suite_norms(config: RunConfig = DEFAULT) -> list[CriterionResult]:
    out = []
    for name in ("koebe", "E2", "P3", "koebe2"):
        entry = lookup(name, config)
        val = weighted_sup_norm(entry.schwarzian_phi, 2, config).value
        out.append(_close("C6", f"schwarzian_norm.{name}", val, 6.0, 1e-4))
    nk = pre_schwarzian(lookup("koebe", config).rational, config.gcd_tol)
    out.append(_close("C6", "preschwarzian_norm.koebe",
                      weighted_sup_norm(nk, 1, config).value, 6.0, 1e-4))
    for name, entry in sorted(load_catalog(None, config).items()):
        if not entry.univalent:
            continue
        val = weighted_sup_norm(entry.schwarzian_phi, 2, config).value
        out.append(_leq("C6", f"univalent_bound.{name}", val, 6.0 + 1e-6))
    return out


# -- criteria 7 and 8: weighted-space norms and multiplier targets ----------------


def suite_bergman(config: RunConfig = DEFAULT) -> list[CriterionResult]:
    out = []
    # dual-method agreement
    tests = [
        ("one", [1.0], lambda z: np.ones_like(z)),
        ("z", [0.0, 1.0], lambda z: z),
        ("z3", [0.0, 0.0, 0.0, 1.0], lambda z: z**3),
        ("binom", bergman.binomial_series(2.0, 0.5, 600),
         lambda z: (1.0 - 0.5 * z) ** -2.0),
    ]
    for alpha in (0.5, 1.0, 2.0):
        for name, coeffs, fn in tests:
            cv = bergman.coeff_norm(coeffs, alpha).value
            av = bergman.area_norm_oracle(fn, alpha)
            out.append(_leq("C7", f"dual.{name}.alpha={alpha:g}",
                            abs(cv - av) / cv, 1e-6))

    # asymptotic constants at r = 0.999 (exponent 2*lam-alpha-2 = 2.5, where
    # the finite-r correction is O(1-r^2); at exponent 1/2 the sqrt-order
    # correction is ~7-14% there, see the pinned-lambda property test)
    r = 0.999
    x = r * r
    from scipy.special import gammaln
    for alpha in (0.5, 1.0, 2.0):
        lam = alpha / 2.0 + 2.25
        eps = 2 * lam - alpha - 2
        c1 = math.exp(gammaln(alpha + 2) + gammaln(eps) - 2 * gammaln(lam))
        v = bergman.coeff_norm(bergman.binomial_series(lam, r, 60000), alpha).value
        out.append(_close("C7", f"asym_pole.alpha={alpha:g}",
                          v * (1 - x) ** eps / c1, 1.0, 0.02))
        c2 = c1 / 2 ** (alpha + 1)
        v2 = bergman.coeff_norm(bergman.even_binomial_series(lam, r, 120000), alpha).value
        out.append(_close("C7", f"asym_pair.alpha={alpha:g}",
                          v2 * (1 - x) ** eps / c2, 1.0, 0.02))

    # multiplier lower bounds vs the target
    printed = serialize.fmt_float(bergman.koebe_target(1.0))
    out.append(_eq("C8", "target.alpha=1.printed", printed, "57.6"))
    for fname in ("koebe", "E2", "P3"):
        S = lookup(fname, config).schwarzian_phi
        for alpha in (0.5, 1.0, 2.0):
            t = bergman.koebe_target(alpha)
            b = bergman.multiplier_lower_bound(S, alpha, config).value
            out.append(_leq("C8", f"reach.{fname}.alpha={alpha:g}", 0.99 * t, b))
            out.append(_leq("C8", f"below.{fname}.alpha={alpha:g}", b, t * (1 + 1e-6)))
    return out


# -- criteria 4 and 5: oracles ----------------------------------------------------


def suite_oracles(config: RunConfig = DEFAULT) -> list[CriterionResult]:
    out = []
    for r in (0.9, 0.99, 0.999):
        I = oracles.singular_circle_integral(2.0, math.pi, r)
        exact = 2.0 * math.pi / (1.0 - r * r)
        out.append(_leq("C4", f"parseval.r={r:g}", abs(I - exact) / exact, 1e-8))
    for kappa, model in ((0.5, oracles.CONST), (1.0, oracles.LOG),
                         (2.0, oracles.POWER), (3.0, oracles.POWER)):
        chk = oracles.asymptotic_check(kappa, model)
        out.append(_eq("C5", f"stable.kappa={kappa:g}", chk.verdict, "Stable"))
    chk = oracles.product_asymptotic_check(
        [0.0, math.pi], lambda z: 1.0 / (1.0 - 0.5 * z), 2.0, oracles.POWER)
    out.append(_eq("C5", "stable.two_zero_product", chk.verdict, "Stable"))
    return out


# -- criterion 9: property suite ---------------------------------------------------


def _mobius_of(R: RationalFn, a, b, c, d, tol) -> RationalFn:
    return R.compose_mobius(a, b, c, d, gcd_tol=tol)


def suite_properties(config: RunConfig = DEFAULT) -> list[CriterionResult]:
    out = []
    rng = np.random.default_rng(20240811)
    zs = 0.85 * np.sqrt(rng.uniform(0.05, 1.0, 100)) * np.exp(2j * np.pi * rng.uniform(size=100))

    # chain rules for g a Moebius map composed with a rational f
    f = RationalFn.from_coeffs([0, 1, 0.21, -0.05j], [1, 0.3 - 0.1j])
    a, b, c, d = 1.0, 0.2 + 0.1j, 0.15j, 1.0
    g_of_f = _mobius_of(f, a, b, c, d, config.gcd_tol)
    Nf, Ngf = pre_schwarzian(f, config.gcd_tol), pre_schwarzian(g_of_f, config.gcd_tol)
    Sf, Sgf = schwarzian(f, config.gcd_tol), schwarzian(g_of_f, config.gcd_tol)
    fp = f.derivative(config.gcd_tol)

    def ng(w):  # N of the Moebius map (az+b)/(cz+d)
        return -2.0 * c / (c * w + d)

    fz = f.num(zs) / f.den(zs)
    fpz = fp.num(zs) / fp.den(zs)
    lhs = Ngf.num(zs) / Ngf.den(zs)
    rhs = ng(fz) * fpz + Nf.num(zs) / Nf.den(zs)
    rel = float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1.0)))
    out.append(_leq("C9", "chain_rule_preschwarzian", rel, 1e-9))
    rel = float(np.max(np.abs(Sgf.num(zs) / Sgf.den(zs) - Sf.num(zs) / Sf.den(zs))))
    out.append(_leq("C9", "mobius_invariance_schwarzian", rel, 1e-10))

    # chain rule for S with inner affine map: S_{f o sigma} = (S_f o sigma) sigma'^2
    sigma_a, sigma_b = 0.31 - 0.12j, 0.05 + 0.02j
    f_of_sig = RationalFn(
        _poly_compose_affine(f.num, sigma_a, sigma_b),
        _poly_compose_affine(f.den, sigma_a, sigma_b), gcd_tol=config.gcd_tol)
    S_comp = schwarzian(f_of_sig, config.gcd_tol)
    sz = sigma_b + sigma_a * zs
    rhs = (Sf.num(sz) / Sf.den(sz)) * sigma_a**2
    rel = float(np.max(np.abs(S_comp.num(zs) / S_comp.den(zs) - rhs)))
    out.append(_leq("C9", "chain_rule_schwarzian_affine", rel, 1e-9))

    # affine invariance of the fitted slope
    k = lookup("koebe", config)
    scaled = RationalDerivative.from_function(k.rational.scale(2.5 - 1.25j), config)
    s1 = estimate_spectrum(k.derivative, -2.0, config, k_max=10).slope
    s2 = estimate_spectrum(scaled, -2.0, config, k_max=10).slope
    out.append(_leq("C9", "affine_invariance_slope", abs(s1 - s2), 1e-10))

    # ray monotonicity at closed-form level
    lab = classify(k.rational, config)
    taus = [-2.0 * (1.0 + t) for t in (0.0, 0.25, 0.5, 0.75)]
    vals = [closed_form_spectrum(lab, t) for t in taus]
    increasing = all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))
    out.append(_eq("C9", "ray_monotone.koebe.tau0=-2", bool(increasing), True))
    lab2 = classify(lookup("R2", config).rational, config)
    vals = [closed_form_spectrum(lab2, 0.6 * (1.0 + t)) for t in (0.0, 0.25, 0.5)]
    out.append(_eq("C9", "ray_monotone.R2.tau0=0.6",
                   bool(all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))), True))

    # deformation: F' = (kappa')^(1+eps) shifts the exponent, beta_F(tau) = beta(tau+eps*tau)
    eps = 0.5
    F = power_deformation(k.derivative, eps)
    est_F = estimate_spectrum(F, -2.0, config, k_max=14)
    est_k = estimate_spectrum(k.derivative, -3.0, config, k_max=14)
    out.append(_close("C9", "deformation_numeric", est_F.spectrum(), est_k.spectrum(), 0.07))
    out.append(_close("C9", "deformation_vs_closed_form", est_F.spectrum(),
                      closed_form_spectrum(lab, -3.0), 0.07))

    # perturbation bound: |beta_F - beta_f| <= |tau| * sup-gap on the pair
    gap = pre_schwarzian_gap(k.derivative, F, 0.0, config)
    out.append(_close("C9", "gap_equals_eps_times_norm", gap, 6.0 * eps, 1e-4))
    closed_diff = abs(closed_form_spectrum(lab, -3.0) - closed_form_spectrum(lab, -2.0))
    out.append(_leq("C9", "gap_inequality", closed_diff, 2.0 * gap))
    return out


def _poly_compose_affine(p, a, b):
    """p(b + a z) as a polynomial."""
    from .poly import ComplexPoly
    acc = ComplexPoly.zero()
    lin = ComplexPoly((b, a))
    power = ComplexPoly.one()
    for ccoef in p.coeffs:
        acc = acc + power.scale(ccoef)
        power = power * lin
    return acc


# -- criterion 10: determinism ------------------------------------------------------


def _determinism_payload(config: RunConfig) -> str:
    rows = [r.to_jsonable() for r in suite_classify(config)]
    k = lookup("koebe", config)
    e1 = lookup("E1", config)
    ests = [estimate_spectrum(k.derivative, -2.0, config, k_max=12),
            estimate_spectrum(e1.derivative, 2.0, config, k_max=12)]
    return serialize.dumps({"classify": rows, "estimates": ests})


def suite_determinism(config: RunConfig = DEFAULT) -> list[CriterionResult]:
    one = _determinism_payload(config.with_overrides(threads=1))
    many = _determinism_payload(config.with_overrides(threads=8))
    return [_eq("C10", "byte_identical_1_vs_8_threads", one == many, True)]


_SUITES: dict[str, Callable[[RunConfig], list[CriterionResult]]] = {
    "classify": suite_classify,
    "spectra": suite_spectra,
    "norms": suite_norms,
    "bergman": suite_bergman,
    "oracles": suite_oracles,
    "properties": suite_properties,
    "determinism": suite_determinism,
}


def run_suite(name: str, config: RunConfig = DEFAULT) -> SuiteReport:
    if name == "all":
        results: list[CriterionResult] = []
        for s in SUITE_NAMES:
            results.extend(_SUITES[s](config))
    elif name in _SUITES:
        results = _SUITES[name](config)
    else:
        raise ValueError(f"unknown suite {name!r}; pick from {('all',) + SUITE_NAMES}")
    return SuiteReport(name, tuple(results), all(r.passed for r in results))
