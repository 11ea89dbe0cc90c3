"""Taxonomy of rational maps by their unit-circle pole structure, and the
closed-form integral means spectrum for each class.

A rational map R with no poles in the open disk falls into one of three
families by the orders of its poles on the unit circle T:

    L_I    no poles on T
    L_II   only simple poles on T
    L_III  at least one double pole on T, none of order >= 3

Independently, R is "orderly" (in_R_O) when every zero of R' on T is simple,
so R' factors as (z-z_1)...(z-z_s) * P_n(z) / P_m(z) with distinct z_j on T,
P_n zero-free on T and P_m zero-free in the closed disk union the circle
poles.  For orderly maps the spectrum beta(tau) has a two-piece closed form:

    tau <= 0:  0 if s = 0, else max(|tau| - 1, 0)
    tau  > 0:  0 for L_I; max(2*tau - 1, 0) for L_II; max(3*tau - 1, 0) for L_III

Poles of order >= 3 on T are reported NotClassified rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT, RunConfig
from .errors import NotInRO, PoleInDisk, Unsupported
from .poly import ComplexPoly, RationalFn
from .roots import INSIDE, RootSet, circle_partition, find_roots

L_I = "L_I"
L_II = "L_II"
L_III = "L_III"
NOT_CLASSIFIED = "NotClassified"

FORMULA_ZERO = "zero"
FORMULA_ABS = "abs_tau_minus_1"
FORMULA_TWO = "two_tau_minus_1"
FORMULA_THREE = "three_tau_minus_1"

_FORMULAS = {
    FORMULA_ZERO: lambda t: 0.0,
    FORMULA_ABS: lambda t: abs(t) - 1.0,
    FORMULA_TWO: lambda t: 2.0 * t - 1.0,
    FORMULA_THREE: lambda t: 3.0 * t - 1.0,
}


@dataclass(frozen=True)
class DerivativeFactorization:
    """R' split as Pi(z) * cofactor_num / den with Pi collecting the simple
    on-circle zeros (empty product when s = 0)."""

    on_circle_zeros: RootSet
    cofactor_num: ComplexPoly
    den: ComplexPoly
    den_on_circle: RootSet
    rprime: RationalFn

    @property
    def s(self) -> int:
        return len(self.on_circle_zeros)

    def pi_poly(self) -> ComplexPoly:
        return ComplexPoly.from_roots([r.location for r in self.on_circle_zeros])

    def reconstruction_error(self) -> float:
        """Max relative coefficient error of Pi * cofactor vs the actual R' numerator."""
        rebuilt = self.pi_poly() * self.cofactor_num
        target = self.rprime.num
        n = max(len(rebuilt.coeffs), len(target.coeffs))
        scale = max(abs(c) for c in target.coeffs)
        return max(
            abs(rebuilt.coefficient(i) - target.coefficient(i)) / scale for i in range(n)
        )

    def to_jsonable(self):
        return {
            "on_circle_zeros": self.on_circle_zeros.to_jsonable(),
            "cofactor_num": self.cofactor_num.to_jsonable(),
            "den": self.den.to_jsonable(),
            "den_on_circle": self.den_on_circle.to_jsonable(),
        }


@dataclass(frozen=True)
class ClassLabel:
    family: str
    in_R_O: bool
    s: int      # distinct critical points on T
    l: int      # order-defining circle poles (simple for L_II, double for L_III)
    t: int      # secondary simple circle poles (L_III only)

    def to_jsonable(self):
        return {"family": self.family, "in_R_O": self.in_R_O,
                "s": self.s, "l": self.l, "t": self.t}


@dataclass(frozen=True)
class SpectrumPiece:
    tau_min: float  # -inf allowed
    tau_max: float  # +inf allowed; interval is (tau_min, tau_max]
    formula: str

    def value(self, tau: float) -> float:
        return _FORMULAS[self.formula](tau)

    def to_jsonable(self):
        def enc(x):
            return None if math.isinf(x) else x
        return {"tau_min": enc(self.tau_min), "tau_max": enc(self.tau_max),
                "formula": self.formula}


@dataclass(frozen=True)
class ClosedFormSpectrum:
    pieces: tuple[SpectrumPiece, ...]

    def __call__(self, tau: float) -> float:
        for piece in self.pieces:
            if piece.tau_min < tau <= piece.tau_max:
                return piece.value(tau)
        # tau = -inf endpoints never match "<"; only reachable for tau=-inf
        raise ValueError(f"tau {tau} not covered")

    def to_jsonable(self):
        return [p.to_jsonable() for p in self.pieces]


def _interior_pole_check(R: RationalFn, config: RunConfig) -> RootSet | None:
    if R.den.degree < 1:
        return None
    den_roots = find_roots(R.den, config)
    if any(r.region == INSIDE for r in den_roots):
        bad = [r.location for r in den_roots if r.region == INSIDE]
        raise PoleInDisk(f"poles inside the unit disk at {bad}")
    return den_roots


def factor_derivative(R: RationalFn, config: RunConfig = DEFAULT) -> DerivativeFactorization:
    """Split R' into its simple on-circle zeros and the zero-free-on-T cofactor."""
    _interior_pole_check(R, config)
    rp = R.derivative(gcd_tol=config.gcd_tol)
    num = rp.num

    if num.degree < 1:
        on = RootSet((), 0)
        cofactor = num
    else:
        num_roots = find_roots(num, config)
        _, on, off = circle_partition(num_roots)
        for r in on:
            if r.multiplicity >= 2:
                raise NotInRO(
                    f"critical point {r.location} on the circle has multiplicity {r.multiplicity}")
        cofactor = ComplexPoly.from_roots(
            off.locations(with_multiplicity=True), leading=num.leading)

    if rp.den.degree >= 1:
        den_roots = find_roots(rp.den, config)
        _, den_on, _ = circle_partition(den_roots)
    else:
        den_on = RootSet((), 0)
    return DerivativeFactorization(on, cofactor, rp.den, den_on, rp)


def classify(R: RationalFn, config: RunConfig = DEFAULT) -> ClassLabel:
    """Family from the circle-pole orders of R itself; in_R_O and s from the
    derivative factorization."""
    den_roots = _interior_pole_check(R, config)
    if den_roots is None:
        orders: list[int] = []
    else:
        _, on, _ = circle_partition(den_roots)
        orders = [r.multiplicity for r in on]

    if not orders:
        family, l, t = L_I, 0, 0
    elif max(orders) == 1:
        family, l, t = L_II, len(orders), 0
    elif max(orders) == 2:
        family = L_III
        l = sum(1 for m in orders if m == 2)
        t = sum(1 for m in orders if m == 1)
    else:
        family, l, t = NOT_CLASSIFIED, 0, 0

    try:
        fact = factor_derivative(R, config)
        in_ro, s = True, fact.s
    except NotInRO:
        in_ro, s = False, 0
    return ClassLabel(family, in_ro, s, l, t)


def closed_form_pieces(label: ClassLabel) -> ClosedFormSpectrum:
    """Piecewise spectrum for an orderly classified map.

    Adjacent formulas agree at the shared endpoints (|tau|-1 = 0 at tau = -1,
    2*tau-1 = 0 at tau = 1/2, 3*tau-1 = 0 at tau = 1/3), so the max(.,0) form
    and this partition describe the same function.
    """
    if not label.in_R_O:
        raise Unsupported("derivative has a multiple critical point on the circle")
    if label.family == NOT_CLASSIFIED:
        raise Unsupported("a circle pole of order >= 3 has no closed form here")

    inf = math.inf
    left = (
        [SpectrumPiece(-inf, -1.0, FORMULA_ABS), SpectrumPiece(-1.0, 0.0, FORMULA_ZERO)]
        if label.s >= 1
        else [SpectrumPiece(-inf, 0.0, FORMULA_ZERO)]
    )
    if label.family == L_I:
        right = [SpectrumPiece(0.0, inf, FORMULA_ZERO)]
    elif label.family == L_II:
        right = [SpectrumPiece(0.0, 0.5, FORMULA_ZERO), SpectrumPiece(0.5, inf, FORMULA_TWO)]
    else:
        right = [SpectrumPiece(0.0, 1.0 / 3.0, FORMULA_ZERO),
                 SpectrumPiece(1.0 / 3.0, inf, FORMULA_THREE)]

    # merge consecutive zero pieces so intervals partition R without seams
    pieces: list[SpectrumPiece] = []
    for p in left + right:
        if pieces and pieces[-1].formula == FORMULA_ZERO and p.formula == FORMULA_ZERO:
            pieces[-1] = SpectrumPiece(pieces[-1].tau_min, p.tau_max, FORMULA_ZERO)
        else:
            pieces.append(p)
    return ClosedFormSpectrum(tuple(pieces))


def closed_form_spectrum(label: ClassLabel, tau: float) -> float:
    """Spectrum value at a single real tau (tau = 0 gives 0 in every class)."""
    if tau == 0:
        if not label.in_R_O or label.family == NOT_CLASSIFIED:
            raise Unsupported("no closed form for this input")
        return 0.0
    return closed_form_pieces(label)(tau)


def classify_and_spectrum(R: RationalFn, tau: float, config: RunConfig = DEFAULT) -> float:
    return closed_form_spectrum(classify(R, config), tau)
