"""p-adic Gamma and Beta functions.

Closed forms for the trivial character; for a tame character the Gamma
integral is a finite sum over spheres, each sphere a sum of roots of unity
evaluated exactly (a vanishing sum is recognized as such by reducing modulo
the cyclotomic polynomial) before any floating evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .core import MultCharacter, NormedCharacter, frac_part, ppow, root_of_unity
from .errors import DomainError, PoleError

__all__ = [
    "GammaValue",
    "gamma_p",
    "gamma_p_n",
    "gamma_p_char",
    "beta_p",
    "sphere_integral",
    "root_sum",
    "POLE_TOL",
]

POLE_TOL = 1e-12


@dataclass(frozen=True)
class GammaValue:
    """Either a value or a pole; ``exact`` is set when the value is rational."""

    value: complex | None = None
    pole: str | None = None
    exact: Fraction | None = None

    def __post_init__(self):
        if (self.value is None) == (self.pole is None):
            raise ValueError("exactly one of value/pole must be given")

    @property
    def is_pole(self) -> bool:
        return self.pole is not None

    def unwrap(self) -> complex:
        if self.pole is not None:
            raise PoleError(f"pole at {self.pole}", self.pole)
        return self.value

    def format(self, digits: int = 15) -> str:
        if self.pole is not None:
            return f"pole at {self.pole}"
        v = self.value
        approx = _fmt_complex(v, digits)
        if self.exact is not None:
            return f"{self.exact} ≈ {approx}"
        return approx


def _fmt_complex(v: complex, digits: int) -> str:
    re = f"{v.real:.{digits}f}"
    if v.imag == 0:
        return re
    sign = "+" if v.imag >= 0 else "-"
    return f"{re}{sign}{abs(v.imag):.{digits}f}i"


def _int_alpha(alpha) -> int | None:
    z = complex(alpha)
    if z.imag == 0 and z.real == int(z.real) and abs(z.real) < 64:
        return int(z.real)
    return None


def _pole_label(p: int, alpha, shift: int = 0) -> str:
    z = complex(alpha) - shift
    j = round(z.imag * math.log(p) / (2 * math.pi))
    base = "0" if j == 0 else f"2*pi*i*{j}/ln({p})"
    return base if shift == 0 else f"{shift}+{base}"


def _ratio(p: int, alpha, top_shift: int) -> GammaValue:
    """(1 - p^(alpha - top_shift)) / (1 - p^(-alpha))."""
    a = _int_alpha(alpha)
    if a is not None:
        den = 1 - Fraction(p) ** (-a)
        if den == 0:
            return GammaValue(pole=_pole_label(p, alpha))
        q = (1 - Fraction(p) ** (a - top_shift)) / den
        return GammaValue(value=complex(float(q)), exact=q)
    z = complex(alpha)
    den = 1 - ppow(p, -z)
    if abs(den) < POLE_TOL:
        return GammaValue(pole=_pole_label(p, alpha))
    return GammaValue(value=complex((1 - ppow(p, z - top_shift)) / den))


def gamma_p(p: int, alpha) -> GammaValue:
    """Gamma_p(alpha) = (1 - p^(alpha-1)) / (1 - p^(-alpha))."""
    return _ratio(p, alpha, 1)


def gamma_p_n(p: int, n: int, alpha) -> GammaValue:
    """Gamma_p^(n)(alpha) = (1 - p^(alpha-n)) / (1 - p^(-alpha))."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    return _ratio(p, alpha, n)


@lru_cache(maxsize=128)
def _cyclotomic(L: int):
    x = sympy.Symbol("x")
    return sympy.Poly(sympy.cyclotomic_poly(L, x), x)


def root_sum(phases, weights=None) -> complex:
    """Sum of w_k exp(2 pi i phase_k) for rational phases and integer weights.

    Returns an exact 0 when the sum vanishes as an algebraic number.
    """
    phases = [Fraction(f) % 1 for f in phases]
    if weights is None:
        weights = [1] * len(phases)
    if not phases:
        return 0j
    L = math.lcm(*(f.denominator for f in phases))
    coeffs = [0] * L
    for f, w in zip(phases, weights):
        coeffs[int(f * L)] += int(w)
    if not any(coeffs):
        return 0j
    x = _cyclotomic(L).gens[0]
    poly = sympy.Poly(list(reversed(coeffs)), x)
    if poly.rem(_cyclotomic(L)).is_zero:
        return 0j
    re = math.fsum(w * root_of_unity(f).real for f, w in zip(phases, weights))
    im = math.fsum(w * root_of_unity(f).imag for f, w in zip(phases, weights))
    return complex(re, im)


def _sphere_phase_sum(p: int, pi1: NormedCharacter, gamma: int) -> tuple:
    """Sum over cosets of pi_1(x) chi_p(x) on |x| = p^gamma, and the coset measure.

    pi_1 is constant on cosets of B_{gamma-1} in the sphere and chi_p on
    cosets of B_0, so the common resolution is B_r with r = min(gamma-1, 0).
    """
    r = min(gamma - 1, 0)
    count = p ** (gamma - r)
    phases = []
    for m in range(count):
        if m % p == 0:
            continue
        x = Fraction(m) * Fraction(p) ** (-gamma)
        phases.append(pi1.phase_of_residue(m % p) + frac_part(x, p))
    return root_sum(phases), Fraction(p) ** r


def sphere_integral(pi: MultCharacter, gamma: int) -> complex:
    """Integral of |x|^(alpha-1) pi_1(x) chi_p(x) over the sphere |x| = p^gamma."""
    s, measure = _sphere_phase_sum(pi.p, pi.pi1, gamma)
    if s == 0:
        return 0j
    return s * float(measure) * pi.modulus(gamma)


def gamma_p_char(pi: MultCharacter) -> GammaValue:
    """Gamma_p(pi_alpha): integral of |x|^(alpha-1) pi_1(x) chi_p(x) over Q_p."""
    if pi.pi1.is_trivial:
        return gamma_p(pi.p, pi.alpha)
    p = pi.p
    # only |x| = p survives; the neighbouring spheres are checked to vanish
    for g in (0, 2):
        if _sphere_phase_sum(p, pi.pi1, g)[0] != 0:
            raise AssertionError(f"sphere |x| = p^{g} does not cancel for {pi.pi1}")
    return GammaValue(value=complex(sphere_integral(pi, 1)))


def product_character(pi1: MultCharacter, pi2: MultCharacter) -> MultCharacter:
    """pi1 * pi2 * |x|, i.e. exponent alpha + beta."""
    if pi1.p != pi2.p:
        raise DomainError("prime mismatch")
    return MultCharacter(pi1.alpha + pi2.alpha, pi1.pi1 * pi2.pi1)


def beta_p(pi1: MultCharacter, pi2: MultCharacter) -> complex:
    """B_p(pi1, pi2) = Gamma(pi1) Gamma(pi2) / Gamma(pi1 pi2 |x|)."""
    a = gamma_p_char(pi1).unwrap()
    b = gamma_p_char(pi2).unwrap()
    c = gamma_p_char(product_character(pi1, pi2)).unwrap()
    if abs(c) < POLE_TOL:
        raise PoleError("denominator Gamma vanishes", str(product_character(pi1, pi2)))
    return a * b / c
