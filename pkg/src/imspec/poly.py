"""Complex polynomial and rational-function arithmetic.

Polynomials are immutable coefficient tuples in ascending degree; rational
functions are reduced quotients with a monic denominator.  Everything here is
pure and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DegenerateInput, ExpansionAtPole, PoleAtPoint

Scalar = Union[int, float, complex]


def _trim(coeffs: Iterable[complex]) -> tuple[complex, ...]:
    cs = [complex(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial with complex coefficients, ascending degree.

    The zero polynomial is the empty tuple; otherwise the trailing coefficient
    is nonzero and ``degree`` is the index of the last coefficient.
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[Scalar]):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> complex:
        if self.is_zero:
            raise DegenerateInput("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, n: int) -> complex:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0j

    @classmethod
    def zero(cls) -> "ComplexPoly":
        return cls(())

    @classmethod
    def one(cls) -> "ComplexPoly":
        return cls((1,))

    @classmethod
    def identity(cls) -> "ComplexPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], leading: Scalar = 1) -> "ComplexPoly":
        p = cls((leading,))
        for w in roots:
            p = p * cls((-w, 1))
        return p

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ComplexPoly(
            tuple(self.coefficient(i) + other.coefficient(i) for i in range(n))
        )

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + (-other)

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "ComplexPoly") -> "ComplexPoly":
        if self.is_zero or other.is_zero:
            return ComplexPoly.zero()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ComplexPoly(out)

    def scale(self, a: Scalar) -> "ComplexPoly":
        return ComplexPoly(tuple(a * c for c in self.coeffs))

    def dilate(self, rho: Scalar) -> "ComplexPoly":
        """Compose with z -> rho*z: c_n -> c_n * rho^n."""
        return ComplexPoly(tuple(c * rho**n for n, c in enumerate(self.coeffs)))

    def deriv(self) -> "ComplexPoly":
        return ComplexPoly(tuple(n * c for n, c in enumerate(self.coeffs) if n > 0))

    def monic(self) -> "ComplexPoly":
        return self.scale(1 / self.leading)

    def trim_relative(self, rel: float = 1e-14) -> "ComplexPoly":
        """Drop trailing coefficients below rel * max|coeff|: arithmetic on
        quotients leaves roundoff residue where a degree should have cancelled
        exactly, and a ~1e-50-relative leading coefficient poisons root finding."""
        if self.is_zero:
            return self
        scale = max(abs(c) for c in self.coeffs)
        cs = list(self.coeffs)
        while cs and abs(cs[-1]) <= rel * scale:
            cs.pop()
        return ComplexPoly(cs)

    def __call__(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        if self.is_zero:
            return np.zeros_like(z, dtype=complex) if isinstance(z, np.ndarray) else 0j
        if isinstance(z, np.ndarray):
            acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
            for c in reversed(self.coeffs[:-1]):
                acc = acc * z + c
            return acc
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    def deflate(self, root: complex) -> "ComplexPoly":
        """Synthetic division by (z - root); the remainder is discarded."""
        if self.degree < 1:
            raise DegenerateInput("cannot deflate a constant")
        rev = list(reversed(self.coeffs))
        out = [rev[0]]
        for c in rev[1:-1]:
            out.append(out[-1] * root + c)
        return ComplexPoly(tuple(reversed(out)))

    def to_jsonable(self):
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_jsonable(cls, data) -> "ComplexPoly":
        return cls(tuple(complex(re, im) for re, im in data))


@dataclass(frozen=True)
class RationalFn:
    """Reduced quotient of two polynomials with a monic denominator."""

    num: ComplexPoly
    den: ComplexPoly

    def __init__(self, num: ComplexPoly, den: ComplexPoly, reduce: bool = True,
                 gcd_tol: float = 1e-6):
        if den.is_zero:
            raise DegenerateInput("zero denominator")
        if reduce:
            num, den = _reduced_parts(num, den, gcd_tol)
        else:
            lead = den.leading
            num, den = num.scale(1 / lead), den.scale(1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_poly(cls, p: ComplexPoly) -> "RationalFn":
        return cls(p, ComplexPoly.one(), reduce=False)

    @classmethod
    def from_coeffs(cls, num, den=(1,), **kw) -> "RationalFn":
        return cls(ComplexPoly(num), ComplexPoly(den), **kw)

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other: "RationalFn") -> "RationalFn":
        return self + other.scale(-1)

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.num, self.den * other.den)

    def scale(self, a: Scalar) -> "RationalFn":
        return RationalFn(self.num.scale(a), self.den, reduce=False)

    def dilate(self, rho: Scalar) -> "RationalFn":
        return RationalFn(self.num.dilate(rho), self.den.dilate(rho))

    def __call__(self, z, pole_tol: float = 1e-13):
        """Quotient of Horner values.  Scalar evaluation raises PoleAtPoint when
        the denominator vanishes to within pole_tol (relative); array evaluation
        is unchecked and may return inf."""
        nv, dv = self.num(z), self.den(z)
        if isinstance(z, np.ndarray):
            return nv / dv
        scale = max(abs(c) for c in self.den.coeffs)
        if abs(dv) <= pole_tol * scale * max(1.0, abs(z)) ** max(self.den.degree, 0):
            raise PoleAtPoint(z)
        return nv / dv

    def derivative(self, gcd_tol: float = 1e-6) -> "RationalFn":
        """Quotient rule followed by reduction, so pole orders on the circle
        come out one higher than the input's."""
        if self.is_polynomial:
            return RationalFn(self.num.deriv().scale(1 / self.den.coeffs[0]),
                              ComplexPoly.one(), reduce=False)
        num = self.num.deriv() * self.den - self.num * self.den.deriv()
        return RationalFn(num, self.den * self.den, gcd_tol=gcd_tol)

    def compose_mobius(self, a: Scalar, b: Scalar, c: Scalar, d: Scalar,
                       gcd_tol: float = 1e-6) -> "RationalFn":
        """(a*R + b) / (c*R + d) for the chain-rule tests."""
        num = self.num.scale(a) + self.den.scale(b)
        den = self.num.scale(c) + self.den.scale(d)
        return RationalFn(num, den, gcd_tol=gcd_tol)

    def taylor(self, N: int) -> np.ndarray:
        return taylor_stream(self, N)

    def to_jsonable(self):
        return {"num": self.num.to_jsonable(), "den": self.den.to_jsonable()}


# -- reduction by root matching ----------------------------------------------


def _reduced_parts(num: ComplexPoly, den: ComplexPoly, tol: float):
    num, den = num.trim_relative(), den.trim_relative()
    lead = den.leading
    num, den = num.scale(1 / lead), den.scale(1 / lead)
    if num.is_zero or num.degree == 0 or den.degree == 0:
        return num, den
    from .roots import clustered_root_list  # local import: roots builds on this module

    nroots = [w for w, m in clustered_root_list(num, min(tol, 1e-8)) for _ in range(m)]
    droots = [w for w, m in clustered_root_list(den, min(tol, 1e-8)) for _ in range(m)]
    cancel_n: list[complex] = []
    cancel_d: list[complex] = []
    for w in droots:
        hit = None
        for i, v in enumerate(nroots):
            if abs(v - w) <= tol:
                hit = i
                break
        if hit is not None:
            cancel_n.append(nroots.pop(hit))
            cancel_d.append(w)
    if not cancel_n:
        return num, den
    # cancel by deflating each polynomial at its own polished roots: this keeps
    # the surviving coefficient content exact instead of rebuilding from roots
    for w in cancel_n:
        num = num.deflate(w)
    for w in cancel_d:
        den = den.deflate(w)
    lead = den.leading
    return num.scale(1 / lead), den.scale(1 / lead)


def reduce_gcd(f: RationalFn, tol: float) -> RationalFn:
    """Cancel approximately-common roots of num and den (within tol)."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    return RationalFn(f.num, f.den, reduce=True, gcd_tol=tol)


def rational_derivative(R: RationalFn, gcd_tol: float = 1e-6) -> RationalFn:
    return R.derivative(gcd_tol=gcd_tol)


def taylor_stream(R: RationalFn, N: int) -> np.ndarray:
    """First N+1 Taylor coefficients of R at 0.

    Uses the linear recurrence q0*c_n = p_n - sum_{k>=1} q_k c_{n-k}; exact up
    to rounding, O(N * deg den).
    """
    q = R.den.coeffs
    if not q or q[0] == 0:
        raise ExpansionAtPole("denominator vanishes at 0")
    p = R.num.coeffs
    q0 = q[0]
    dq = len(q) - 1
    c = np.zeros(N + 1, dtype=complex)
    for n in range(N + 1):
        acc = p[n] if n < len(p) else 0j
        for k in range(1, min(n, dq) + 1):
            acc -= q[k] * c[n - k]
        c[n] = acc / q0
    return c
