"""Pre-Schwarzian N_f = f''/f', Schwarzian S_f = N_f' - N_f^2/2, and the
weighted sup-norms sup |phi(z)| (1-|z|^2)^j over the disk.

Sup-norms are computed on a polar grid (with angular refinement near the
on-circle singularities of phi) combined with Richardson extrapolation of the
weighted modulus along the rays toward each singular angle; every extremum in
the shipped catalog is radial, and the grid covers interior maxima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import DegenerateInput, PoleInDisk
from .ims import AnalyticDerivative, power_deformation  # re-exported: deformation pairs with the gap
from .poly import RationalFn

__all__ = [
    "WeightedSupNorm", "PhiEvaluator", "pre_schwarzian", "schwarzian",
    "weighted_sup_norm", "pre_schwarzian_gap", "power_deformation",
]

_TWO_PI = 2.0 * math.pi


def pre_schwarzian(R: RationalFn, gcd_tol: float = 1e-6) -> RationalFn:
    """N_f = f''/f' as a reduced quotient."""
    rp = R.derivative(gcd_tol=gcd_tol)
    if rp.num.is_zero:
        raise DegenerateInput("derivative vanishes identically")
    num = rp.num.deriv() * rp.den - rp.num * rp.den.deriv()
    return RationalFn(num, rp.num * rp.den, gcd_tol=gcd_tol)


def schwarzian(R: RationalFn, gcd_tol: float = 1e-6) -> RationalFn:
    """S_f = N_f' - N_f^2 / 2 as a reduced quotient."""
    N = pre_schwarzian(R, gcd_tol)
    Np = N.derivative(gcd_tol=gcd_tol)
    half_sq = RationalFn(N.num * N.num, N.den * N.den, gcd_tol=gcd_tol).scale(0.5)
    return Np - half_sq


@dataclass(frozen=True)
class PhiEvaluator:
    """Closed-form phi for sup-norm evaluation when phi is not rational."""

    value: Callable[[np.ndarray], np.ndarray]
    singular_angles: tuple[float, ...]


@dataclass(frozen=True)
class WeightedSupNorm:
    value: float
    witness: complex
    radial_limits: tuple[tuple[float, float], ...]  # (angle, extrapolated limit)

    def to_jsonable(self):
        return {"value": self.value,
                "witness_re": self.witness.real, "witness_im": self.witness.imag,
                "radial_limits": [[a, v] for a, v in self.radial_limits]}


def _rational_abs_and_angles(phi: RationalFn, config: RunConfig):
    """Factored |phi| evaluator: products of |z - root| stay accurate within
    (1-r) of a circle root, where expanded Horner cancels catastrophically."""
    from .roots import clustered_root_list

    zeros = tuple(clustered_root_list(phi.num, config.cluster_tol)) if phi.num.degree >= 1 else ()
    poles = tuple(clustered_root_list(phi.den, config.cluster_tol)) if phi.den.degree >= 1 else ()
    angles: list[float] = []
    for w, _ in poles:
        if abs(w) < 1.0 - config.circle_tol:
            raise PoleInDisk(f"pole at {w} inside the disk")
    for w, _ in (*zeros, *poles):
        if abs(abs(w) - 1.0) <= config.circle_tol:
            angles.append(math.atan2(w.imag, w.real) % _TWO_PI)
    lead = abs(phi.num.leading)

    def absval(z):
        acc = np.full(np.shape(z), lead, dtype=float)
        for w, m in zeros:
            acc = acc * np.abs(z - w) ** m
        for w, m in poles:
            acc = acc / np.abs(z - w) ** m
        return acc

    return absval, tuple(sorted(set(angles)))


def _richardson_limit(g: np.ndarray) -> float:
    """Limit of g(h) as h -> 0 from samples at h = 2^-k (k increasing), for g
    with an expansion in powers of h.  Diverging sequences return inf."""
    if g[-1] > 10 * max(g[0], 1e-300) and g[-1] > 2 * g[-3]:
        return math.inf
    T = [list(map(float, g))]
    levels = min(6, len(g) - 1)
    for m in range(1, levels + 1):
        prev = T[-1]
        fac = 2.0**m
        T.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(len(prev) - 1)])
    return float(T[-1][-1])


def _weighted_sup(absval: Callable[[np.ndarray], np.ndarray], j: int,
                  singular_angles: Sequence[float], r_lo: float,
                  config: RunConfig) -> WeightedSupNorm:
    radii = sorted({i / 16 for i in range(1, 16)} | {1.0 - 2.0**-k for k in range(1, 21)})
    radii = [r for r in radii if r > r_lo]
    base = np.linspace(0.0, _TWO_PI, 720, endpoint=False)
    extra = []
    for a in singular_angles:
        offs = 2.0 ** -np.arange(1, 25)
        extra.extend(((a + offs) % _TWO_PI).tolist())
        extra.extend(((a - offs) % _TWO_PI).tolist())
        extra.append(a % _TWO_PI)
    thetas = np.unique(np.concatenate([base, np.array(extra)])) if extra else base

    best_val, best_z = 0.0, 0j
    for r in radii:
        z = r * np.exp(1j * thetas)
        w = absval(z) * (1.0 - r * r) ** j
        w = np.where(np.isfinite(w), w, 0.0)
        i = int(np.argmax(w))
        if w[i] > best_val:
            best_val, best_z = float(w[i]), complex(z[i])

    limits = []
    ks = np.arange(10, 21)
    rk = 1.0 - 2.0**-ks
    for a in singular_angles:
        z = rk * np.exp(1j * a)
        g = absval(z) * (1.0 - rk * rk) ** j
        limits.append((float(a % _TWO_PI), _richardson_limit(g)))

    finite = [v for _, v in limits if math.isfinite(v)]
    value = max([best_val] + finite)
    return WeightedSupNorm(value, best_z, tuple(limits))


def weighted_sup_norm(phi: Union[RationalFn, PhiEvaluator], j: int,
                      config: RunConfig = DEFAULT) -> WeightedSupNorm:
    """sup over the disk of |phi(z)| (1-|z|^2)^j, j in {1, 2}."""
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    if isinstance(phi, RationalFn):
        if phi.num.is_zero:
            return WeightedSupNorm(0.0, 0j, ())
        absval, angles = _rational_abs_and_angles(phi, config)
    else:
        absval = lambda z: np.abs(phi.value(z))
        angles = phi.singular_angles
    return _weighted_sup(absval, j, angles, 0.0, config)


def pre_schwarzian_gap(f: AnalyticDerivative, g: AnalyticDerivative, r0: float,
                       config: RunConfig = DEFAULT) -> float:
    """sup over the annulus r0 < |z| < 1 of |N_g(z) - N_f(z)| (1-|z|^2)."""
    if not 0.0 <= r0 < 1.0:
        raise ValueError("r0 must lie in [0, 1)")

    def absval(z):
        return np.abs(g.nf(z) - f.nf(z))

    angles = tuple(sorted(set(f.singular_angles) | set(g.singular_angles)))
    return _weighted_sup(absval, 1, angles, r0, config).value
