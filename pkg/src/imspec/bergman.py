"""Weighted Hilbert-space norms by coefficient series, the multiplier operator
phi -> S*phi from the alpha-space into the (alpha+4)-space, and lower bounds
for its norm against the Koebe target 36(a+3)(a+5)/((a+2)(a+4)).

The coefficient norm uses ||phi||^2 = sum n! Gamma(a+2)/Gamma(n+a+2) |a_n|^2,
with weights computed through log-gamma differences so large n and shifted
exponents do not overflow.  An independent area-integral oracle (radial
Gauss-Jacobi in (1-rho^2)^a, angular trapezoid) cross-checks it.

Lower bounds for the multiplier norm come from the binomial test families
(1-rz)^-lam and (1-rz^2)^-lam in two ways: truncated-convolution ratios on a
finite (r, lam) grid, and the closed-form r -> 1 limit of the same ratio,

    |s2|^2 * Gamma(a+6) Gamma(lam)^2 / (Gamma(a+2) Gamma(lam+2)^2),

where s2 is the Laurent coefficient of S at an on-circle double pole (the
limit uses that both norms in the ratio grow like (1-r^2)^-(2*lam-a-2) with
known constants).  The finite-grid values converge to the limit only like
1/log(1/(1-r)), so the limit bounds are what actually approach the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gammaln, roots_jacobi

from .config import DEFAULT, RunConfig
from .errors import DegenerateInput, InvalidWeight, TruncationUnreliable
from .poly import RationalFn, taylor_stream
from .roots import ON_CIRCLE, find_roots

_JACOBI_CACHE: dict = {}
_WEIGHT_CACHE: dict = {}


def _weights(alpha: float, N: int) -> np.ndarray:
    key = (float(alpha), N)
    if key not in _WEIGHT_CACHE:
        n = np.arange(N + 1, dtype=float)
        _WEIGHT_CACHE[key] = np.exp(
            gammaln(n + 1) + gammaln(alpha + 2) - gammaln(n + alpha + 2))
    return _WEIGHT_CACHE[key]


@dataclass(frozen=True)
class WeightedSeriesNorm:
    alpha: float
    truncation: int
    value: float
    tail_bound: float

    def to_jsonable(self):
        return {"alpha": self.alpha, "truncation": self.truncation,
                "value": self.value, "tail_bound": self.tail_bound}


def coeff_norm(coeffs: Sequence[complex] | np.ndarray, alpha: float,
               N: Optional[int] = None) -> WeightedSeriesNorm:
    """Squared coefficient norm of sum a_n z^n in the alpha-weighted space."""
    if alpha <= -1:
        raise InvalidWeight(f"alpha must exceed -1, got {alpha}")
    a = np.asarray(coeffs, dtype=complex)
    if N is not None:
        a = a[:N + 1]
    L = len(a) - 1
    terms = _weights(alpha, L) * np.abs(a) ** 2
    value = float(np.sum(terms))

    # geometric-ratio tail estimate from the last decade of significant terms;
    # a series that dies well before the truncation point has no tail
    tail = 0.0
    floor = float(np.max(terms)) * 1e-25 if value > 0 else 0.0
    sig = np.nonzero(terms > floor)[0]
    if len(sig) and sig[-1] >= int(0.9 * L):
        dec = terms[max(0, int(0.9 * L)):sig[-1] + 1]
        dec = dec[dec > floor]
        if len(dec) >= 4:
            q = (dec[-1] / dec[0]) ** (1.0 / (len(dec) - 1))
            tail = float(dec[-1] * q / (1.0 - q)) if q < 1.0 else math.inf
    return WeightedSeriesNorm(alpha, L, value, tail)


def area_norm_oracle(phi: Callable[[np.ndarray], np.ndarray], alpha: float,
                     n_radial: int = 160, n_angular: int = 1024) -> float:
    """(alpha+1) * Int_disk |phi|^2 (1-|z|^2)^alpha dA/pi by polar quadrature;
    independent of coeff_norm."""
    if alpha <= -1:
        raise InvalidWeight(f"alpha must exceed -1, got {alpha}")
    key = (alpha, n_radial)
    if key not in _JACOBI_CACHE:
        _JACOBI_CACHE[key] = roots_jacobi(n_radial, alpha, 0.0)
    x, w = _JACOBI_CACHE[key]
    t = (x + 1.0) / 2.0
    theta = np.linspace(0.0, 2.0 * math.pi, n_angular, endpoint=False)
    ring = np.exp(1j * theta)
    total = 0.0
    for ti, wi in zip(t, w):
        vals = phi(math.sqrt(ti) * ring)
        total += wi * float(np.mean(np.abs(vals) ** 2))
    return (alpha + 1.0) * 2.0 ** -(alpha + 1.0) * total


def binomial_series(gamma: complex, r: complex, N: int) -> np.ndarray:
    """Coefficients of (1 - r z)^-gamma: Gamma(n+gamma)/(n! Gamma(gamma)) r^n."""
    c = np.zeros(N + 1, dtype=complex)
    c[0] = 1.0
    for n in range(N):
        c[n + 1] = c[n] * (n + gamma) / (n + 1) * r
    return c


def even_binomial_series(gamma: complex, r: complex, N: int) -> np.ndarray:
    """Coefficients of (1 - r z^2)^-gamma, zero-padded at odd indices."""
    c = np.zeros(N + 1, dtype=complex)
    base = binomial_series(gamma, r, N // 2)
    c[0::2] = base[:len(c[0::2])]
    return c


def koebe_target(alpha: float) -> float:
    """36 (a+3)(a+5) / ((a+2)(a+4))."""
    if alpha <= -1:
        raise InvalidWeight(f"alpha must exceed -1, got {alpha}")
    return 36.0 * (alpha + 3.0) * (alpha + 5.0) / ((alpha + 2.0) * (alpha + 4.0))


def multiplier_ratio(S: RationalFn, rho: float, phi_coeffs: Sequence[complex],
                     alpha: float, N: int = 20000,
                     s_taylor: Optional[np.ndarray] = None) -> float:
    """||S(rho z) * phi||^2_{alpha+4} / ||phi||^2_alpha with truncated series.

    Both norms carry tail bounds; a tail above 1% of its partial sum (which
    happens for rho = 1 with circle poles and non-decaying phi) is rejected.
    s_taylor, when given, must be the precomputed taylor_stream(S, N).
    """
    if alpha <= -1:
        raise InvalidWeight(f"alpha must exceed -1, got {alpha}")
    if not (0.0 < rho <= 1.0):
        raise ValueError("dilation must lie in (0, 1]")
    phi = np.asarray(phi_coeffs, dtype=complex)[:N + 1]
    if not np.any(phi):
        raise DegenerateInput("phi is identically zero")
    if S.num.is_zero:
        return 0.0
    s = (taylor_stream(S, N) if s_taylor is None else s_taylor) * rho ** np.arange(N + 1)
    prod = fftconvolve(s, phi)[:N + 1]
    num = coeff_norm(prod, alpha + 4.0)
    den = coeff_norm(phi, alpha)
    for part in (num, den):
        if not math.isfinite(part.tail_bound) or part.tail_bound > 0.01 * part.value:
            raise TruncationUnreliable(
                f"tail bound {part.tail_bound:.3e} exceeds 1% of partial sum {part.value:.3e}")
    return num.value / den.value


# -- lower bounds --------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierBound:
    value: float
    method: str        # "grid" or "radial-limit"
    family: str        # "pole" for (1-rz)^-lam, "pair" for (1-rz^2)^-lam
    r: float           # 1.0 marks the radial limit
    lam: float

    def to_jsonable(self):
        return {"value": self.value, "method": self.method, "family": self.family,
                "r": self.r, "lam": self.lam}


def _double_pole_residues(S: RationalFn, config: RunConfig) -> list[tuple[complex, complex]]:
    """(pole, s2) for each on-circle pole of order exactly 2 of S, where
    s2 = lim (1 - z/pole)^2 S(z)."""
    out = []
    if S.den.degree < 1:
        return out
    for root in find_roots(S.den, config):
        if root.region != ON_CIRCLE or root.multiplicity != 2:
            continue
        zeta = root.location / abs(root.location)
        rest = S.den.deflate(zeta).deflate(zeta)
        out.append((zeta, S.num(zeta) / (zeta * zeta * rest(zeta))))
    return out


def _is_even(coeffs: np.ndarray) -> bool:
    odd = coeffs[1::2]
    scale = float(np.max(np.abs(coeffs))) or 1.0
    return bool(np.all(np.abs(odd) <= 1e-10 * scale))


def limit_ratio_bound(s2_abs: float, lam: float, alpha: float) -> float:
    """r -> 1 limit of the family ratio for a double pole with |s2|."""
    return s2_abs ** 2 * math.exp(
        gammaln(alpha + 6.0) + 2 * gammaln(lam) - gammaln(alpha + 2.0) - 2 * gammaln(lam + 2.0))


def multiplier_lower_bound(S: RationalFn, alpha: float,
                           config: RunConfig = DEFAULT,
                           grid_k: Sequence[int] = range(4, 13),
                           grid_j: Sequence[int] = range(1, 9),
                           limit_j: Sequence[int] = range(1, 13),
                           N: int = 20000) -> MultiplierBound:
    """Best available lower bound for the squared multiplier norm of S."""
    if S.num.is_zero:
        return MultiplierBound(0.0, "grid", "pole", 0.0, alpha / 2 + 1)
    lam0 = alpha / 2.0 + 1.0
    poles = _double_pole_residues(S, config)
    align = max(poles, key=lambda p: abs(p[1]))[0] if poles else 1.0 + 0j

    stream = taylor_stream(S, N)
    even = _is_even(stream)
    best = MultiplierBound(0.0, "grid", "pole", 0.0, lam0)
    for k in grid_k:
        r = 1.0 - 2.0**-k
        for j in grid_j:
            lam = lam0 + 2.0**-j
            phi = binomial_series(lam, r / align, N)
            v = multiplier_ratio(S, r, phi, alpha, N, s_taylor=stream)
            if v > best.value:
                best = MultiplierBound(v, "grid", "pole", r, lam)
            if even:
                phi2 = even_binomial_series(lam, r / (align * align), N)
                v2 = multiplier_ratio(S, math.sqrt(r), phi2, alpha, N, s_taylor=stream)
                if v2 > best.value:
                    best = MultiplierBound(v2, "grid", "pair", r, lam)

    # radial-limit bounds: sup over r dominates the r -> 1 limit, which is
    # available in closed form at each on-circle double pole
    for _, s2 in poles:
        for j in limit_j:
            lam = lam0 + 2.0**-j
            v = limit_ratio_bound(abs(s2), lam, alpha)
            if v > best.value:
                best = MultiplierBound(v, "radial-limit", "pole", 1.0, lam)
    return best


@dataclass(frozen=True)
class ShimorinRow:
    alpha: float
    lower_bound: float
    target: float

    @property
    def margin(self) -> float:
        return self.target - self.lower_bound

    def to_jsonable(self):
        return {"alpha": self.alpha, "lower_bound": self.lower_bound,
                "target": self.target, "margin": self.margin}


@dataclass(frozen=True)
class ShimorinReport:
    rows: tuple[ShimorinRow, ...]
    verdict: str
    note: str = ("lower bounds can never certify the criterion, only falsify it; "
                 "'consistent' means no margin is significantly negative")

    def to_jsonable(self):
        return {"rows": [r.to_jsonable() for r in self.rows],
                "verdict": self.verdict, "note": self.note}


def shimorin_report(S: RationalFn, alpha_grid: Sequence[float],
                    config: RunConfig = DEFAULT, tol: float = 1e-6) -> ShimorinReport:
    """Per alpha: test-family lower bound vs the Koebe target."""
    rows = []
    for alpha in alpha_grid:
        if alpha <= 0:
            raise InvalidWeight("the criterion grid requires alpha > 0")
        lb = multiplier_lower_bound(S, alpha, config).value
        rows.append(ShimorinRow(alpha, lb, koebe_target(alpha)))
    ok = all(r.margin >= -tol * r.target for r in rows)
    return ShimorinReport(tuple(rows), "consistent" if ok else "falsified")
