"""Independent brute-force oracles for the circle integrals.

Nothing here shares mesh logic with the adaptive engine in ims: these
integrators use fixed graded meshes with composite Simpson rules, so agreement
between the two is evidence, not tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from .config import DEFAULT, RunConfig
from .ims import AnalyticDerivative

_TWO_PI = 2.0 * math.pi

POWER = "power"
LOG = "log"
CONST = "const"


def singular_circle_integral(kappa: float, alpha_window: float, r: float,
                             points_per_decade: int = 2500) -> float:
    """int_{-a}^{a} d(theta) / |1 - r e^{i theta}|^kappa on a graded mesh.

    The integrand is even in theta, and the mesh is geometric toward theta=0
    where |1 - r e^{i theta}| ~ sqrt((1-r)^2 + r theta^2) bottoms out.
    """
    if not 0.0 < alpha_window <= math.pi:
        raise ValueError("window must lie in (0, pi]")
    if not 0.0 < r < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    t_min = (1.0 - r) * 1e-4
    decades = math.log10(alpha_window / t_min)
    n = max(int(points_per_decade * decades), 1000)
    theta = np.concatenate([[0.0], np.geomspace(t_min, alpha_window, n)])
    vals = (1.0 + r * r - 2.0 * r * np.cos(theta)) ** (-kappa / 2.0)
    return 2.0 * float(simpson(vals, x=theta))


def product_circle_integral(zero_angles: Sequence[float],
                            g: Callable[[np.ndarray], np.ndarray],
                            kappa: float, r: float,
                            points_per_decade: int = 1500) -> float:
    """int dtheta / |prod (z - e^{i a}) * g(z)|^kappa at |z| = r, graded toward
    each of the given angles."""
    t_min = (1.0 - r) * 1e-4
    segs = []
    angles = sorted(a % _TWO_PI for a in zero_angles)
    for idx, a in enumerate(angles):
        nxt = angles[(idx + 1) % len(angles)] if len(angles) > 1 else a + _TWO_PI
        half_gap = ((nxt - a) % _TWO_PI) / 2 if len(angles) > 1 else math.pi
        reach = min(math.pi / 2, half_gap) if half_gap > 0 else math.pi / 2
        decades = math.log10(reach / t_min)
        n = max(int(points_per_decade * decades), 800)
        offs = np.concatenate([[0.0], np.geomspace(t_min, reach, n)])
        segs.append(a + offs)
        segs.append(a - offs[::-1])
    # close the remaining arcs with a uniform cover
    segs.append(np.linspace(0.0, _TWO_PI, 4096))
    theta = np.unique(np.concatenate(segs) % _TWO_PI)
    theta = np.append(theta, theta[0] + _TWO_PI)
    z = r * np.exp(1j * theta)
    f = np.ones_like(z)
    for a in angles:
        f = f * (z - np.exp(1j * a))
    vals = np.abs(f * g(z)) ** (-kappa)
    return float(simpson(vals, x=theta))


@dataclass(frozen=True)
class AsymptoticCheck:
    kappa_exponent: float
    model: str
    radii: tuple[float, ...]
    ratios: tuple[float, ...]
    verdict: str  # "Stable" | "Drifting"

    def to_jsonable(self):
        return {"kappa": self.kappa_exponent, "model": self.model,
                "radii": list(self.radii), "ratios": list(self.ratios),
                "verdict": self.verdict}


def _model_values(model: str, kappa: float, radii: np.ndarray) -> np.ndarray:
    if model == POWER:
        return (1.0 - radii) ** (1.0 - kappa)
    if model == LOG:
        return np.log(1.0 / (1.0 - radii))
    if model == CONST:
        return np.ones_like(radii)
    raise ValueError(f"unknown model {model!r}")


def _verdict(ratios: np.ndarray) -> str:
    last = ratios[-5:]
    return "Stable" if float(last.max() / last.min()) <= 1.10 else "Drifting"


def asymptotic_check(kappa: float, model: str, k_lo: int = 6, k_hi: int = 16,
                     alpha_window: float = math.pi) -> AsymptoticCheck:
    """Ratios of the singular integral to the model over r_k = 1 - 2^-k;
    Stable when the last five ratios vary by at most 10%."""
    radii = 1.0 - 2.0 ** -np.arange(k_lo, k_hi + 1, dtype=float)
    I = np.array([singular_circle_integral(kappa, alpha_window, r) for r in radii])
    ratios = I / _model_values(model, kappa, radii)
    return AsymptoticCheck(kappa, model, tuple(radii), tuple(map(float, ratios)),
                           _verdict(ratios))


def product_asymptotic_check(zero_angles: Sequence[float],
                             g: Callable[[np.ndarray], np.ndarray],
                             kappa: float, model: str,
                             k_lo: int = 6, k_hi: int = 16) -> AsymptoticCheck:
    """Same ladder check for int dtheta/|f|^kappa with f = prod(z-z_j) * g."""
    radii = 1.0 - 2.0 ** -np.arange(k_lo, k_hi + 1, dtype=float)
    I = np.array([product_circle_integral(zero_angles, g, kappa, r) for r in radii])
    ratios = I / _model_values(model, kappa, radii)
    return AsymptoticCheck(kappa, model, tuple(radii), tuple(map(float, ratios)),
                           _verdict(ratios))


def riemann_cross_check(f: AnalyticDerivative, tau: complex, r: float,
                        M: int = 1 << 16, config: RunConfig = DEFAULT) -> float:
    """Plain M-point uniform Riemann sum of exp(Re(tau log f')); used only to
    cross-check the adaptive engine."""
    if M < 1 << 14:
        raise ValueError("need M >= 2^14")
    tau = complex(tau)
    theta = -math.pi + _TWO_PI * np.arange(M) / M
    if tau.imag == 0.0:
        w = np.abs(f.fprime(r * np.exp(1j * theta))) / abs(f.fprime0())
        vals = w ** tau.real
    else:
        logs = f.log_fprime_at(r, np.mod(theta, _TWO_PI), config=config)
        vals = np.exp((tau * logs).real)
    return float(np.sum(vals)) * _TWO_PI / M


# -- shared inequality helpers ---------------------------------------------------


def power_mean_bound(values: Sequence[complex], p: float) -> tuple[float, float]:
    """(sum |a_k|)^p and its bound n^(p-1) * sum |a_k|^p, for p > 1."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    mags = np.abs(np.asarray(values, dtype=complex))
    lhs = float(np.sum(mags) ** p)
    rhs = float(len(mags) ** (p - 1.0) * np.sum(mags ** p))
    return lhs, rhs


def cos_quadratic_bounds(theta: float) -> tuple[float, float, float]:
    """(lower, cos(theta), upper) for the bracket 1 - t^2/2 <= cos t <= 1 - t^2/4
    valid on [0, pi/2]."""
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError("bracket holds on [0, pi/2]")
    return 1.0 - theta * theta / 2.0, math.cos(theta), 1.0 - theta * theta / 4.0
