"""Numerical integral means spectrum: branch-tracked complex powers of f',
adaptive circle quadrature, and radius-ladder slope fitting.

The spectrum is the growth exponent of I(r) = int exp(Re(tau*log f')) dtheta
against |log(1-r)| as r -> 1.  The complex power uses the single-valued branch
of log f' with log f'(0) = 0 (f' is renormalized by f'(0) internally; the
fitted slope is invariant under that scaling).

Logs on a circle of radius r are obtained in two steps: the value at theta=0
comes from integrating N_f = f''/f' along the radial segment [0, r]; the
continuation around the circle accumulates principal argument differences on a
mesh that is refined until each step moves the phase by less than pi/4.  The
walk must close up (f' is zero- and pole-free in the working annulus), and the
closure defect is checked.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import (BranchTrackingFailed, DegenerateInput, ExpansionAtPole,
                     QuadratureBudgetExceeded)
from .poly import RationalFn

_TWO_PI = 2.0 * math.pi
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X24, _GL_W24 = np.polynomial.legendre.leggauss(24)


# ---------------------------------------------------------------------------
# derivative objects


class AnalyticDerivative:
    """Evaluable derivative of an analytic map of the disk.

    Subclasses provide fprime(z) and nf(z) (vectorized), the angles of the
    on-circle zeros/poles of f', and the inner radius of the annulus that is
    free of zeros and poles of f'.
    """

    singular_angles: tuple[float, ...] = ()
    annulus_start: float = 0.0

    def fprime(self, z):  # pragma: no cover - abstract
        raise NotImplementedError

    def nf(self, z):  # pragma: no cover - abstract
        raise NotImplementedError

    def fprime0(self) -> complex:
        return complex(self.fprime(np.array([0j]))[0])

    # -- branch bookkeeping -------------------------------------------------

    def log_anchor(self, r: float) -> complex:
        """log(f'(r)/f'(0)) continued along [0, r] on the real segment."""
        return _integrate_nf_radial(self, r)

    def branch_walk(self, r: float, config: RunConfig = DEFAULT) -> "BranchWalk":
        return _build_walk(self, r, config)

    def log_fprime_at(self, r: float, thetas: np.ndarray,
                      walk: Optional["BranchWalk"] = None,
                      config: RunConfig = DEFAULT) -> np.ndarray:
        """Continued log f'(r e^{i theta}) (renormalized) at the given angles."""
        if walk is None:
            walk = self.branch_walk(r, config)
        z = r * np.exp(1j * np.asarray(thetas))
        vals = self.fprime(z) / self.fprime0()
        mod = np.log(np.abs(vals))
        principal = np.angle(vals)
        est = np.interp(np.mod(thetas, _TWO_PI), walk.thetas, walk.args)
        k = np.round((est - principal) / _TWO_PI)
        return mod + 1j * (principal + _TWO_PI * k)


@dataclass(frozen=True)
class RationalDerivative(AnalyticDerivative):
    """f' given as a reduced rational function, evaluated in factored form.

    Horner on expanded coefficients cancels catastrophically within ~(1-r) of a
    circle root, exactly where the integrand peaks; products of (z - root)
    factors do not, and they give N_f as an exact partial-fraction sum.
    """

    fprime_fn: RationalFn
    lead: complex
    zeros: tuple[tuple[complex, int], ...]
    poles: tuple[tuple[complex, int], ...]
    singular_angles: tuple[float, ...]
    annulus_start: float

    @classmethod
    def from_fprime(cls, fprime: RationalFn, config: RunConfig = DEFAULT) -> "RationalDerivative":
        from .roots import clustered_root_list

        zeros = (tuple(clustered_root_list(fprime.num, config.cluster_tol))
                 if fprime.num.degree >= 1 else ())
        poles = (tuple(clustered_root_list(fprime.den, config.cluster_tol))
                 if fprime.den.degree >= 1 else ())
        angles: list[float] = []
        inner = 0.0
        for w, _ in (*zeros, *poles):
            if abs(abs(w) - 1.0) <= config.circle_tol:
                angles.append(math.atan2(w.imag, w.real) % _TWO_PI)
            elif abs(w) < 1.0:
                inner = max(inner, abs(w))
        return cls(fprime, fprime.num.leading, zeros, poles,
                   tuple(sorted(angles)), inner)

    @classmethod
    def from_function(cls, R: RationalFn, config: RunConfig = DEFAULT) -> "RationalDerivative":
        return cls.from_fprime(R.derivative(gcd_tol=config.gcd_tol), config)

    def fprime(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.lead, dtype=complex)
        for w, m in self.zeros:
            acc = acc * (z - w) ** m
        for w, m in self.poles:
            acc = acc / (z - w) ** m
        return acc

    def nf(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros(z.shape, dtype=complex)
        for w, m in self.zeros:
            acc = acc + m / (z - w)
        for w, m in self.poles:
            acc = acc - m / (z - w)
        return acc


@dataclass(frozen=True)
class FormulaDerivative(AnalyticDerivative):
    """f' given by closed-form callables; log_fn, when present, is a
    single-valued branch of log f' with log f'(0) = 0."""

    label: str
    fprime_fn: Callable[[np.ndarray], np.ndarray]
    nf_fn: Callable[[np.ndarray], np.ndarray]
    singular_angles: tuple[float, ...]
    annulus_start: float = 0.0
    log_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def fprime(self, z):
        return self.fprime_fn(z)

    def nf(self, z):
        return self.nf_fn(z)

    def log_anchor(self, r: float) -> complex:
        if self.log_fn is not None:
            return complex(self.log_fn(np.array([r + 0j]))[0])
        return _integrate_nf_radial(self, r)

    def log_fprime_at(self, r, thetas, walk=None, config: RunConfig = DEFAULT):
        if self.log_fn is not None:
            z = r * np.exp(1j * np.asarray(thetas))
            return self.log_fn(z)
        return super().log_fprime_at(r, thetas, walk, config)


@dataclass(frozen=True)
class PowerDeformation(AnalyticDerivative):
    """F' = (f')^(1+eps) with the same branch anchor, so N_F = (1+eps) N_f."""

    base: AnalyticDerivative
    eps: float

    def __post_init__(self):
        if self.eps <= -1:
            raise DegenerateInput("deformation exponent must exceed -1")
        object.__setattr__(self, "singular_angles", self.base.singular_angles)
        object.__setattr__(self, "annulus_start", self.base.annulus_start)

    def nf(self, z):
        return (1.0 + self.eps) * self.base.nf(z)

    def fprime(self, z):
        # pointwise principal power of the renormalized base; branch-consistent
        # values go through log_fprime_at instead
        base = self.base.fprime(z) / self.base.fprime0()
        return np.exp((1.0 + self.eps) * np.log(base))

    def fprime0(self) -> complex:
        return 1.0 + 0j

    def log_anchor(self, r: float) -> complex:
        return (1.0 + self.eps) * self.base.log_anchor(r)

    def branch_walk(self, r, config: RunConfig = DEFAULT):
        return self.base.branch_walk(r, config)

    def log_fprime_at(self, r, thetas, walk=None, config: RunConfig = DEFAULT):
        return (1.0 + self.eps) * self.base.log_fprime_at(r, thetas, walk, config)


def power_deformation(f: AnalyticDerivative, eps: float) -> AnalyticDerivative:
    return PowerDeformation(f, eps)


# ---------------------------------------------------------------------------
# branch tracking


@dataclass(frozen=True)
class BranchWalk:
    r: float
    thetas: np.ndarray   # ascending over [0, 2*pi]
    args: np.ndarray     # continued arg of renormalized f'
    defect: float


def _integrate_nf_radial(f: AnalyticDerivative, r: float) -> complex:
    """Composite Gauss-Legendre for int_0^r N_f(t) dt, segments graded toward
    t = r (singularities of N_f sit on |z| = 1 or beyond the working annulus)."""
    breaks = [0.0]
    d = 0.5
    while d > (1.0 - r):
        breaks.append(1.0 - d)
        d /= 2
    breaks.append(r)
    total = 0j
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        t = mid + half * _GL_X24
        total += half * np.sum(_GL_W24 * f.nf(t.astype(complex)))
    return complex(total)


def _build_walk(f: AnalyticDerivative, r: float, config: RunConfig,
                max_nodes: int = 400000) -> BranchWalk:
    anchor = f.log_anchor(r)
    # seed mesh: uniform plus geometric refinement near each singular angle,
    # so no seed interval can hide a full phase turn
    seeds = set(np.linspace(0.0, _TWO_PI, 1025))
    floor = max((1.0 - r) / 16.0, 1e-14)
    for a in f.singular_angles:
        w = 0.5
        while w > floor:
            for s in (a - w, a + w):
                seeds.add(s % _TWO_PI)
            w /= 2
    thetas = np.array(sorted(seeds))
    if thetas[-1] < _TWO_PI:
        thetas = np.append(thetas, _TWO_PI)

    vals = f.fprime(r * np.exp(1j * thetas))
    principal = np.angle(vals)

    out_t = [thetas[0]]
    out_a = [principal[0]]
    nodes = len(thetas)
    for i in range(len(thetas) - 1):
        stack = [(thetas[i], principal[i], thetas[i + 1], principal[i + 1])]
        while stack:
            t0, a0, t1, a1 = stack.pop()
            d = _wrap(a1 - a0)
            if abs(d) <= math.pi / 4 or (t1 - t0) < 1e-13:
                out_a.append(out_a[-1] + d)
                out_t.append(t1)
                continue
            tm = 0.5 * (t0 + t1)
            am = float(np.angle(f.fprime(r * np.exp(1j * np.array([tm]))))[0])
            nodes += 1
            if nodes > max_nodes:
                raise BranchTrackingFailed(math.inf, "branch walk mesh blew up")
            stack.append((tm, am, t1, a1))
            stack.append((t0, a0, tm, am))

    args = np.array(out_a)
    defect = abs(args[-1] - args[0])
    if defect > 1e-6:
        raise BranchTrackingFailed(defect)
    # constant shifts cancel in the accumulated differences, so pinning the
    # theta=0 value to the anchor yields the continued renormalized argument
    args = args - args[0] + anchor.imag
    return BranchWalk(r, np.array(out_t), args, defect)


def _wrap(x: float) -> float:
    return (x + math.pi) % _TWO_PI - math.pi


def branched_log_derivative(f: AnalyticDerivative, r: float,
                            grid: Sequence[float] | np.ndarray,
                            config: RunConfig = DEFAULT) -> np.ndarray:
    """Continued log f' samples (renormalized so log f'(0) = 0) on the grid."""
    if not (f.annulus_start < r < 1.0):
        raise ValueError(f"radius {r} outside the working annulus ({f.annulus_start}, 1)")
    return f.log_fprime_at(r, np.asarray(grid, dtype=float), config=config)


def closure_defect(f: AnalyticDerivative, r: float, config: RunConfig = DEFAULT) -> float:
    return _build_walk(f, r, config).defect


# ---------------------------------------------------------------------------
# circle quadrature


def _panel_breakpoints(singular: Sequence[float], r: float) -> np.ndarray:
    """Breakpoints on [0, 2pi]: geometric grading toward each singular angle
    down to width (1-r)/8, plus a coarse cover of the rest."""
    floor = (1.0 - r) / 8.0
    pts = {0.0, _TWO_PI}
    angles = sorted(a % _TWO_PI for a in singular)
    for idx, a in enumerate(angles):
        reach = math.pi / 2
        if len(angles) > 1:
            nxt = (angles[(idx + 1) % len(angles)] - a) % _TWO_PI
            prv = (a - angles[idx - 1]) % _TWO_PI
            gaps = [g for g in (nxt, prv) if g > 0]
            if gaps:
                reach = min(reach, min(gaps) / 2)
        w = reach
        while w > floor:
            pts.add((a - w) % _TWO_PI)
            pts.add((a + w) % _TWO_PI)
            w /= 2
        pts.add((a - floor) % _TWO_PI)
        pts.add((a + floor) % _TWO_PI)
        pts.add(a % _TWO_PI)
    bp = np.array(sorted(pts))
    # cap panel width so the smooth regions are still resolved
    out = [bp[0]]
    for b in bp[1:]:
        while b - out[-1] > math.pi / 4:
            out.append(out[-1] + math.pi / 4)
        out.append(b)
    return np.array(out)


def _gauss_panel(values_fn, lo: float, hi: float) -> float:
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return half * float(np.sum(_GL_W * values_fn(mid + half * _GL_X)))


def integral_means(f: AnalyticDerivative, tau: complex, r: float,
                   config: RunConfig = DEFAULT, panel_budget: int = 40000) -> float:
    """I(r) = int_{-pi}^{pi} exp(Re(tau * log f'(r e^{i theta}))) dtheta."""
    if not (f.annulus_start < r < 1.0):
        raise ValueError(f"radius {r} outside the working annulus ({f.annulus_start}, 1)")
    tau = complex(tau)
    a0 = abs(f.fprime0())

    if tau.imag == 0.0:
        t = tau.real

        def values(thetas):
            w = np.abs(f.fprime(r * np.exp(1j * thetas))) / a0
            return w**t
    else:
        walk = f.branch_walk(r, config) if not _has_closed_log(f) else None

        def values(thetas):
            logs = f.log_fprime_at(r, thetas, walk=walk, config=config)
            return np.exp((tau * logs).real)

    bp = _panel_breakpoints(f.singular_angles, r)
    total = 0.0
    budget = [0]
    coarse = sum(_gauss_panel(values, lo, hi) for lo, hi in zip(bp[:-1], bp[1:]))
    abs_floor = config.quad_tol * abs(coarse) / max(len(bp), 1)

    def refine(lo, hi, val, depth):
        budget[0] += 1
        if budget[0] > panel_budget:
            raise QuadratureBudgetExceeded(f"more than {panel_budget} panels at r={r}")
        mid = 0.5 * (lo + hi)
        left = _gauss_panel(values, lo, mid)
        right = _gauss_panel(values, mid, hi)
        fine = left + right
        if abs(fine - val) <= config.quad_tol * abs(fine) + abs_floor or depth > 40:
            return fine
        return refine(lo, mid, left, depth + 1) + refine(mid, hi, right, depth + 1)

    for lo, hi in zip(bp[:-1], bp[1:]):
        total += refine(lo, hi, _gauss_panel(values, lo, hi), 0)
    return total


def _has_closed_log(f: AnalyticDerivative) -> bool:
    if isinstance(f, FormulaDerivative):
        return f.log_fn is not None
    if isinstance(f, PowerDeformation):
        return _has_closed_log(f.base)
    return False


# ---------------------------------------------------------------------------
# ladder estimates


@dataclass(frozen=True)
class LadderPoint:
    k: int
    r: float
    logI: float

    @property
    def abscissa(self) -> float:
        return -math.log(1.0 - self.r)


@dataclass(frozen=True)
class SpectrumEstimate:
    tau: complex
    ladder: tuple[LadderPoint, ...]
    slope: float
    residual: float
    log_regime: bool
    diagnostics: dict = field(default_factory=dict, compare=False)

    def spectrum(self) -> float:
        """Best estimate of the growth exponent: 0 in the logarithmic regime."""
        return 0.0 if self.log_regime else self.slope

    def to_jsonable(self):
        return {"tau_re": self.tau.real, "tau_im": self.tau.imag,
                "slope": self.slope, "residual": self.residual,
                "log_regime": self.log_regime}

    def ladder_rows(self):
        return [(p.k, p.r, p.logI, p.abscissa) for p in self.ladder]


def _linfit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    A = np.vstack([x, np.ones_like(x)]).T
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ sol - y) ** 2)))
    return float(sol[0]), float(sol[1]), resid


def estimate_spectrum(f: AnalyticDerivative, tau: complex,
                      config: RunConfig = DEFAULT,
                      k_min: Optional[int] = None, k_max: Optional[int] = None) -> SpectrumEstimate:
    """Least-squares slope of log I(r_k) against -log(1 - r_k) on the ladder
    r_k = 1 - 2^-k, with detection of the logarithmic (slope-zero) regime."""
    k_lo = config.k_min if k_min is None else k_min
    k_hi = config.k_max if k_max is None else k_max
    if not (3 <= k_lo < k_hi <= 24):
        raise ValueError("need 3 <= k_min < k_max <= 24")
    ks = list(range(k_lo, k_hi + 1))
    radii = [1.0 - 2.0**-k for k in ks]

    def logI(r: float) -> float:
        return math.log(integral_means(f, tau, r, config))

    if config.worker_count > 1 and len(radii) > 1:
        with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
            ys = list(pool.map(logI, radii))  # ordered: reduction independent of threads
    else:
        ys = [logI(r) for r in radii]

    ladder = tuple(LadderPoint(k, r, y) for k, r, y in zip(ks, radii, ys))
    window = max(4, (k_hi - k_lo) // 2)
    pts = ladder[-window:]
    x = np.array([p.abscissa for p in pts])
    y = np.array([p.logI for p in pts])
    slope, _, resid = _linfit(x, y)

    # logarithmic regime: I grows like |log(1-r)| itself, so log I flattens
    # and I is an excellent *linear* function of the abscissa
    growth = float(y[-1] - y[0])
    I = np.exp(y - y.max())
    _, _, lin_resid = _linfit(x, I)
    lin_rel = lin_resid / float(np.mean(I))
    _, _, loglog_resid = _linfit(np.log(x), y)
    log_regime = bool(growth >= 0.1 and slope < 0.25 and lin_rel < 1e-3)

    diagnostics = {"growth": growth, "linear_in_abscissa_relative_residual": lin_rel,
                   "loglog_residual": loglog_resid, "window": window}
    return SpectrumEstimate(complex(tau), ladder, slope, resid, log_regime, diagnostics)


# ---------------------------------------------------------------------------
# coefficient-growth estimate


@dataclass(frozen=True)
class CoeffGrowthEstimate:
    value: float
    exponent: float
    degenerate: bool


def power_series_power(fprime: RationalFn, sigma: complex, N: int) -> np.ndarray:
    """Taylor coefficients of (f'/f'(0))^sigma via the linear ODE recurrence
    (PQ) h' = sigma (P'Q - P Q') h; the branch is fixed by h(0) = 1."""
    P, Q = fprime.num, fprime.den
    if Q.coefficient(0) == 0:
        raise ExpansionAtPole("f' has a pole at the origin")
    if P.coefficient(0) == 0:
        raise DegenerateInput("f'(0) = 0")
    A = P * Q
    B = (P.deriv() * Q - P * Q.deriv()).scale(sigma)
    a = A.coeffs
    b = B.coeffs if not B.is_zero else (0j,)
    h = np.zeros(N + 1, dtype=complex)
    h[0] = 1.0
    for n in range(N):
        acc = 0j
        for j in range(0, min(n, len(b) - 1) + 1):
            acc += b[j] * h[n - j]
        for j in range(1, min(n + 1, len(a) - 1) + 1):
            acc -= a[j] * (n + 1 - j) * h[n + 1 - j]
        h[n + 1] = acc / (a[0] * (n + 1))
    return h


def coefficient_growth_spectrum(fprime: RationalFn, tau: complex, N: int = 2048,
                                config: RunConfig = DEFAULT) -> CoeffGrowthEstimate:
    """Estimate beta via the square-integrability criterion: if the Taylor
    coefficients of (f')^(tau/2) grow like n^p, the spectrum is max(2p+1, 0)."""
    if N < 256:
        raise ValueError("need N >= 256")
    c = power_series_power(fprime, complex(tau) / 2.0, N)
    n = np.arange(N // 2, N + 1)
    mags = np.abs(c[N // 2:])
    keep = mags > 1e-300
    if np.count_nonzero(keep) < 8:
        return CoeffGrowthEstimate(0.0, -math.inf, True)
    p, _, _ = _linfit(np.log(n[keep].astype(float)), np.log(mags[keep]))
    return CoeffGrowthEstimate(max(2.0 * p + 1.0, 0.0), p, False)
