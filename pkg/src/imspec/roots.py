"""Polynomial root finding with multiplicities and unit-circle classification.

Simultaneous Aberth-Ehrlich iteration from deterministic perturbed-circle
starting points, stopped per-root at the roundoff floor of the Horner residual
(multiple roots never satisfy a step criterion: their approximations splatter
at radius ~eps^(1/m)).  Multiplicities are then recovered by clustering across
a small ladder of radii; a candidate m-fold cluster is accepted only after its
center is re-polished as a root of p^(m-1) (which is simple there, so Newton
reaches machine precision) and the lower derivatives at the center are checked
to be negligible on the cluster scale.  Degrees here are tiny (<= ~20).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan2, factorial

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import DegenerateInput, RootFindingFailed
from .poly import ComplexPoly

INSIDE = "Inside"
ON_CIRCLE = "OnCircle"
OUTSIDE = "Outside"

_MAX_ITERS = 400
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    region: str

    def to_jsonable(self):
        return {"re": self.location.real, "im": self.location.imag,
                "mult": self.multiplicity, "region": self.region}


@dataclass(frozen=True)
class RootSet:
    roots: tuple[Root, ...]
    degree: int

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def in_region(self, region: str) -> "RootSet":
        picked = tuple(r for r in self.roots if r.region == region)
        return RootSet(picked, sum(r.multiplicity for r in picked))

    def locations(self, with_multiplicity: bool = True) -> list[complex]:
        if with_multiplicity:
            return [r.location for r in self.roots for _ in range(r.multiplicity)]
        return [r.location for r in self.roots]

    def to_jsonable(self):
        return [r.to_jsonable() for r in self.roots]


def _sort_key(w: complex):
    return (abs(w), atan2(w.imag, w.real))


def _horner_error_bound(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    mags = np.abs(coeffs)
    az = np.abs(z)
    acc = np.full_like(az, mags[-1])
    for m in mags[-2::-1]:
        acc = acc * az + m
    return acc * _EPS * (2 * len(coeffs))


def aberth_roots(coeffs: tuple[complex, ...], max_iters: int = _MAX_ITERS) -> np.ndarray:
    """All roots of the polynomial with the given ascending coefficients."""
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[-1]
    n = len(c) - 1
    if n == 1:
        return np.array([-c[0] / c[1]])
    p = ComplexPoly(c)
    dp = p.deriv()
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    j = np.arange(n)
    z = radius * np.exp(2j * np.pi * (j + 0.37) / n + 0.41j)
    done = np.zeros(n, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(max_iters):
            pv = p(z)
            done |= np.abs(pv) <= 4.0 * _horner_error_bound(c, z)
            if np.all(done):
                break
            dv = dp(z)
            ratio = np.where(dv != 0, pv / np.where(dv == 0, 1, dv), 0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            diff[diff == 0] = np.inf
            s = np.sum(1.0 / diff, axis=1)
            denom = 1.0 - ratio * s
            step = np.where(denom != 0, ratio / np.where(denom == 0, 1, denom), ratio)
            step = np.where(done | ~np.isfinite(step), 0, step)
            z = z - step
            if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))):
                break
    # loose net against true non-convergence; stagnation at the roundoff floor
    # of a multiple root (|p| ~ |z - w|^m) must pass
    with np.errstate(all="ignore"):
        pv = p(z)
        abs_scale = np.sum(np.abs(c)) * np.maximum(1.0, np.abs(z)) ** n
        bad = ~(np.abs(pv) <= 1e-6 * abs_scale)
    if np.any(bad):
        raise RootFindingFailed("Aberth iteration left residuals above the roundoff floor",
                                partial=z)
    return z


def _newton(p: ComplexPoly, z: complex, steps: int = 30) -> complex:
    dp = p.deriv()
    with np.errstate(all="ignore"):
        for _ in range(steps):
            dv = dp(z)
            if dv == 0 or not np.isfinite(dv):
                break
            dz = p(z) / dv
            if not np.isfinite(dz):
                break
            z = z - dz
            if abs(dz) <= 1e-16 * max(1.0, abs(z)):
                break
    return z


def polished_roots(p: ComplexPoly) -> np.ndarray:
    """Raw (unclustered) roots, each given a few Newton steps."""
    if p.degree < 1:
        return np.array([], dtype=complex)
    zs = aberth_roots(p.coeffs)
    return np.array([_newton(p, z, steps=4) for z in zs])


def _derivatives_at(p: ComplexPoly, z: complex, order: int) -> list[complex]:
    vals = []
    q = p
    for _ in range(order + 1):
        vals.append(complex(q(z)))
        q = q.deriv()
    return vals


def _multiple_root_center(p: ComplexPoly, guess: complex, m: int) -> complex:
    """An m-fold root of p is a simple root of p^(m-1): polish it there."""
    q = p
    for _ in range(m - 1):
        q = q.deriv()
    return _newton(q, guess)


def _cluster_valid(p: ComplexPoly, c: complex, m: int, rho: float,
                   delta: float = 1e-3) -> bool:
    vals = _derivatives_at(p, c, m)
    lead = abs(vals[m]) * rho**m / factorial(m)
    if lead == 0.0:
        return False
    low = sum(abs(vals[j]) * rho**j / factorial(j) for j in range(m))
    return low <= delta * lead


def _groups_within(zs: np.ndarray, idx: list[int], rho: float) -> list[list[int]]:
    parent = {i: i for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in idx:
        for b in idx:
            if a < b and abs(zs[a] - zs[b]) <= rho:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def clustered_root_list(p: ComplexPoly, cluster_tol: float) -> list[tuple[complex, int]]:
    """(location, multiplicity) pairs covering all roots of p (leading
    coefficients below 1e-14 of the largest are treated as exact zeros)."""
    p = p.trim_relative()
    zs = polished_roots(p)
    n = len(zs)
    scale = max(1.0, float(np.max(np.abs(zs))) if n else 1.0)
    ladder = [cluster_tol]
    rho = cluster_tol
    while rho < 1e-3 * scale:
        rho *= 10.0
        ladder.append(min(rho, 1e-3 * scale))

    remaining = list(range(n))
    found: list[tuple[complex, int]] = []
    for rho in ladder:
        for group in _groups_within(zs, remaining, rho):
            if len(group) < 2:
                continue
            centroid = complex(np.mean(zs[group]))
            # pull in any stragglers of the same cluster before validating
            expanded = [i for i in remaining if abs(zs[i] - centroid) <= 5 * rho]
            m = len(expanded)
            if m < 2:
                continue
            center = _multiple_root_center(p, complex(np.mean(zs[expanded])), m)
            if abs(center - centroid) > 10 * rho + 1e-6 * scale:
                continue
            if _cluster_valid(p, center, m, rho):
                found.append((center, m))
                remaining = [i for i in remaining if i not in expanded]
    for i in remaining:
        found.append((complex(zs[i]), 1))
    return found


def find_roots(p: ComplexPoly, config: RunConfig = DEFAULT) -> RootSet:
    """Roots with multiplicities and Inside/OnCircle/Outside labels."""
    p = p.trim_relative()
    if p.degree < 1:
        raise DegenerateInput("need degree >= 1")
    pairs = clustered_root_list(p, config.cluster_tol)
    max_coeff = max(abs(c) for c in p.coeffs)
    scale = max(1.0, max(abs(w) for w, _ in pairs))

    roots = []
    for w, m in pairs:
        if abs(abs(w) - 1.0) <= config.circle_tol:
            region = ON_CIRCLE
        elif abs(w) < 1.0:
            region = INSIDE
        else:
            region = OUTSIDE
        roots.append(Root(w, m, region))
    rs = RootSet(tuple(sorted(roots, key=lambda r: _sort_key(r.location))), p.degree)

    if rs.total_multiplicity != p.degree:
        raise RootFindingFailed("multiplicities do not sum to the degree", partial=rs)
    for r in rs:
        if abs(p(r.location)) > 50 * config.residual_tol * max_coeff * scale ** p.degree:
            raise RootFindingFailed(
                f"residual {abs(p(r.location)):.3e} too large at {r.location}", partial=rs)
    return rs


def circle_partition(rs: RootSet) -> tuple[RootSet, RootSet, RootSet]:
    """(inside, on, outside); on-circle roots are snapped to exact modulus 1."""
    inside, on, outside = [], [], []
    for r in rs:
        if r.region == ON_CIRCLE:
            snapped = r.location / abs(r.location)
            on.append(Root(snapped, r.multiplicity, ON_CIRCLE))
        elif r.region == INSIDE:
            inside.append(r)
        else:
            outside.append(r)

    def mk(lst):
        return RootSet(tuple(lst), sum(r.multiplicity for r in lst))

    return mk(inside), mk(on), mk(outside)
