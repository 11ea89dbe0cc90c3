"""Built-in catalog of maps with evaluable derivatives and expected facts,
plus the reference table of known universal spectrum values.

Entries load from the packaged TOML (users can merge their own file with the
same schema).  Rational entries carry the map itself; formula entries carry
closed-form derivative evaluators with an explicit single-valued log branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import UnknownEntry
from .ims import AnalyticDerivative, FormulaDerivative, RationalDerivative
from .poly import ComplexPoly, RationalFn
from .schwarzian import PhiEvaluator

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # "rational" | "formula"
    rational: Optional[RationalFn]
    formula: Optional[str]
    params: dict
    derivative: AnalyticDerivative
    function: Callable[[np.ndarray], np.ndarray]
    schwarzian_phi: object  # RationalFn or PhiEvaluator
    univalent: bool
    expected: dict = field(repr=False)

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"


@dataclass(frozen=True)
class ReferenceSpectrum:
    tau: float
    model: str
    bounded: bool
    value: Optional[float]   # point value when known exactly (or conjectured)
    lower: float
    upper: float             # inf when no numeric upper value is known

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def to_jsonable(self):
        return {"tau": self.tau, "model": self.model, "bounded": self.bounded,
                "value": self.value, "lower": self.lower,
                "upper": None if math.isinf(self.upper) else self.upper}


# -- formula library -----------------------------------------------------------


def _koebe_t_family(T: int):
    e = 2.0 / T

    def fprime(z):
        zT = z**T
        return (1.0 + zT) * np.exp(-(1.0 + e) * np.log(1.0 - zT))

    def nf(z):
        zT1 = z**(T - 1)
        zT = z * zT1
        return T * zT1 / (1.0 + zT) + (T + 2.0) * zT1 / (1.0 - zT)

    def log_fprime(z):
        zT = z**T
        return np.log(1.0 + zT) - (1.0 + e) * np.log(1.0 - zT)

    def function(z):
        return z * np.exp(-e * np.log(1.0 - z**T))

    def schwarz(z):
        z2T = z**(2 * T)
        num = (2.0 * (T * T - 1.0) * z**(3 * T - 2)
               - 2.0 * (T * T + 2.0) * z**(2 * T - 2)
               + 2.0 * (T * T - 1.0) * z**(T - 2))
        return num / (1.0 - z2T) ** 2

    zeros = tuple(((2 * m + 1) * math.pi / T) % _TWO_PI for m in range(T))
    poles = tuple((2 * m * math.pi / T) % _TWO_PI for m in range(T))
    angles = tuple(sorted(set(zeros) | set(poles)))
    deriv = FormulaDerivative(f"koebe_t(T={T})", fprime, nf, angles, 0.0, log_fprime)
    return deriv, function, PhiEvaluator(schwarz, angles)


def _spiral_family(gamma: float):
    rot = cmath.exp(2j * gamma)
    A = 1.0 + 2.0 * cmath.exp(1j * gamma) * math.cos(gamma)

    def fprime(z):
        return (1.0 + z * rot) * np.exp(-A * np.log(1.0 - z))

    def nf(z):
        return rot / (1.0 + z * rot) + A / (1.0 - z)

    def log_fprime(z):
        return np.log(1.0 + z * rot) - A * np.log(1.0 - z)

    def function(z):
        return z * np.exp(-(A - 1.0) * np.log(1.0 - z))

    def schwarz(z):
        n = nf(z)
        npr = -rot * rot / (1.0 + z * rot) ** 2 + A / (1.0 - z) ** 2
        return npr - 0.5 * n * n

    zero_angle = (math.pi - 2.0 * gamma) % _TWO_PI
    angles = tuple(sorted({0.0, zero_angle}))
    deriv = FormulaDerivative(f"spiral(gamma={gamma})", fprime, nf, angles, 0.0, log_fprime)
    return deriv, function, PhiEvaluator(schwarz, angles)


def _log_half_plane():
    fprime = RationalFn.from_coeffs([1.0], [1.0, -1.0])

    def function(z):
        return -np.log(1.0 - z)

    deriv = RationalDerivative.from_fprime(fprime)
    schwarz = RationalFn.from_coeffs([0.5], [1.0, -2.0, 1.0])
    return deriv, function, schwarz


_FORMULAS = {
    "koebe_t": lambda params: _koebe_t_family(int(params["T"])),
    "spiral_koebe": lambda params: _spiral_family(float(params["gamma"])),
    "log_half_plane": lambda params: _log_half_plane(),
}


# -- loading -------------------------------------------------------------------


def _entry_from_dict(raw: dict, config: RunConfig) -> CatalogEntry:
    name = raw["name"]
    kind = raw["kind"]
    expected = raw.get("expected", {})
    univalent = bool(raw.get("univalent", False))
    if kind == "rational":
        num = ComplexPoly.from_jsonable(raw["num"])
        den = ComplexPoly.from_jsonable(raw["den"])
        R = RationalFn(num, den, gcd_tol=config.gcd_tol)
        deriv = RationalDerivative.from_function(R, config)
        from .schwarzian import schwarzian
        return CatalogEntry(name, kind, R, None, {}, deriv,
                            lambda z, R=R: R.num(z) / R.den(z),
                            schwarzian(R, config.gcd_tol), univalent, expected)
    if kind == "formula":
        formula = raw["formula"]
        params = raw.get("params", {})
        if formula not in _FORMULAS:
            raise UnknownEntry(f"unknown formula id {formula!r}")
        deriv, function, schwarz = _FORMULAS[formula](params)
        return CatalogEntry(name, kind, None, formula, dict(params), deriv,
                            function, schwarz, univalent, expected)
    raise UnknownEntry(f"unknown entry kind {kind!r}")


_CACHE: dict = {}


def load_catalog(extra_path: Optional[str] = None,
                 config: RunConfig = DEFAULT) -> dict[str, CatalogEntry]:
    key = (extra_path, config)
    if key in _CACHE:
        return _CACHE[key]
    data = tomllib.loads(
        resources.files("imspec").joinpath("catalog_data.toml").read_text())
    entries = {}
    for raw in data["entry"]:
        e = _entry_from_dict(raw, config)
        entries[e.name] = e
    if extra_path is not None:
        with open(extra_path, "rb") as fh:
            user = tomllib.load(fh)
        for raw in user.get("entry", []):
            e = _entry_from_dict(raw, config)
            entries[e.name] = e
    _CACHE[key] = entries
    return entries


def lookup(name: str, config: RunConfig = DEFAULT,
           extra_path: Optional[str] = None) -> CatalogEntry:
    entries = load_catalog(extra_path, config)
    if name not in entries:
        raise UnknownEntry(f"no catalog entry named {name!r}; "
                           f"known: {', '.join(sorted(entries))}")
    return entries[name]


def list_names(config: RunConfig = DEFAULT) -> list[str]:
    return sorted(load_catalog(None, config))


# -- reference universal-spectrum table -----------------------------------------

KNOWN_EXACT = "KnownExact"
KNOWN_LOWER = "KnownLowerBound"
KRAETZER = "Kraetzer"


def reference_universal_spectrum(tau: float, model: str = KNOWN_EXACT,
                                 bounded: bool = False) -> ReferenceSpectrum:
    """Known values of the universal spectrum over all normalized univalent
    maps (bounded=False) or the bounded subclass (bounded=True).

    Exact values: 3*tau-1 for tau >= 2/5 (full class) and tau-1 for tau >= 2
    (bounded class).  Elsewhere only bounds are known; the conjectured model
    interpolates tau^2/4 on [-2, 2] and |tau|-1 outside.
    """
    if model == KRAETZER:
        v = tau * tau / 4.0 if -2.0 <= tau <= 2.0 else abs(tau) - 1.0
        return ReferenceSpectrum(tau, model, bounded, v, v, v)

    if bounded:
        lower = max(0.0, abs(tau) - 1.0) if tau <= -1 else max(0.0, tau - 1.0)
        exact = tau - 1.0 if tau >= 2.0 else None
    else:
        lower = max(0.0, abs(tau) - 1.0) if tau <= -1 else max(0.0, 3.0 * tau - 1.0)
        exact = 3.0 * tau - 1.0 if tau >= 0.4 else None

    if model == KNOWN_LOWER:
        return ReferenceSpectrum(tau, model, bounded, None, lower, math.inf)
    if model == KNOWN_EXACT:
        if exact is not None:
            return ReferenceSpectrum(tau, model, bounded, exact, exact, exact)
        return ReferenceSpectrum(tau, model, bounded, None, lower, math.inf)
    raise ValueError(f"unknown model {model!r}")


# -- boundary probe --------------------------------------------------------------


@dataclass(frozen=True)
class SelfIntersectionProbe:
    min_distance: float
    theta_pair: tuple[float, float]
    separation: float
    heuristic: bool = True

    def to_jsonable(self):
        return {"min_distance": self.min_distance,
                "theta_pair": list(self.theta_pair),
                "separation": self.separation, "heuristic": self.heuristic}


def boundary_selfintersection_probe(entry: CatalogEntry, samples: int = 2048,
                                    min_separation: float = 0.2) -> SelfIntersectionProbe:
    """Closest approach of boundary image points with well-separated parameters.

    Heuristic only: a small minimum suggests (but does not prove) that the
    boundary curve meets itself.  Requires a rational entry without circle
    poles so the boundary values are finite.
    """
    if not entry.is_rational:
        raise ValueError("probe requires a rational entry")
    R = entry.rational
    if R.den.degree >= 1:
        from .roots import ON_CIRCLE, find_roots
        if any(r.region == ON_CIRCLE for r in find_roots(R.den)):
            raise ValueError("probe requires an entry without circle poles")
    theta = np.linspace(0.0, _TWO_PI, samples, endpoint=False)
    z = np.exp(1j * theta)
    w = R.num(z) / R.den(z)
    best = math.inf
    pair = (0.0, 0.0)
    for i in range(samples):
        dth = np.abs(theta - theta[i])
        dth = np.minimum(dth, _TWO_PI - dth)
        mask = dth >= min_separation
        if not np.any(mask):
            continue
        d = np.abs(w[mask] - w[i])
        j = int(np.argmin(d))
        if d[j] < best:
            best = float(d[j])
            pair = (float(theta[i]), float(theta[np.nonzero(mask)[0][j]]))
    return SelfIntersectionProbe(best, pair, min_separation)
