"""Kozyrev wavelets on Q_p and their eigenvalue property for D^alpha.

    Theta_{gamma j a}(x) = p^(-gamma/2) chi_p(p^-1 j (p^gamma x - a)) Omega(|p^gamma x - a|)

with gamma an integer, j in 1..p-1 and a a representative of Q_p / Z_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .core import Grid, PRational, as_fraction, frac_part, norm_exponent, ppow, root_of_unity
from .errors import DomainError
from .lizorkin import LizorkinKind
from .operators import apply, taibleson
from .schwartz import TestFunction, common_grid, regrid

__all__ = ["WaveletIndex", "kozyrev", "enumerate_shifts", "enumerate_indices", "eigencheck",
           "EigenReport", "gram", "inner"]


@dataclass(frozen=True)
class WaveletIndex:
    p: int
    gamma: int
    j: int
    a: Fraction = Fraction(0)

    def __post_init__(self):
        if not 1 <= self.j <= self.p - 1:
            raise DomainError(f"wavelet index j={self.j} outside [1, {self.p - 1}]")
        a = as_fraction(self.a)
        if frac_part(a, self.p) != a:
            raise DomainError(f"shift a={a} is not a canonical representative of Q_{self.p}/Z_{self.p}")
        object.__setattr__(self, "a", a)

    @property
    def depth(self) -> int:
        """d with a = k / p^d (0 for a = 0)."""
        e = norm_exponent(self.a, self.p)
        return 0 if e is None else e

    def __str__(self):
        return f"(gamma={self.gamma}, j={self.j}, a={self.a})"


def wavelet_grid(idx: WaveletIndex) -> Grid:
    # support: |x - p^-gamma a| <= p^gamma; oscillation: cosets of B_{gamma-1}
    return Grid(idx.p, 1, idx.gamma - 1, idx.gamma + idx.depth)


def kozyrev(idx: WaveletIndex) -> TestFunction:
    p, g = idx.p, idx.gamma
    grid = wavelet_grid(idx)
    amp = float(p) ** (-g / 2) if g % 2 else float(Fraction(p) ** (-g // 2))
    pg = Fraction(p) ** g
    coeffs = np.zeros(grid.shape, dtype=complex)
    anchor = None
    for m in range(grid.side):
        x = Fraction(m) * Fraction(p) ** (-grid.N)
        u = pg * x - idx.a
        if norm_exponent(u, p) is None or norm_exponent(u, p) <= 0:
            phase = frac_part(idx.j * u / p, p)
            coeffs[m] = amp * root_of_unity(phase)
            if phase == 0:
                anchor = m
    return TestFunction(grid, _balance(coeffs, anchor, amp))


def _balance(c: np.ndarray, anchor: int, amp: float) -> np.ndarray:
    """Snap to a lattice of spacing ~2^-50 amp and fold the integer residual
    into the phase-0 cell, so the p roots of unity sum to exactly zero."""
    q = math.ldexp(1.0, math.frexp(amp)[1] - 50)
    out = []
    for part in (c.real, c.imag):
        k = np.rint(part / q).astype(np.int64)
        k[anchor] -= int(k.sum())
        out.append(k.astype(float) * q)
    return out[0] + 1j * out[1]


def enumerate_shifts(p: int, depth: int) -> list:
    """Representatives a = k / p^depth of Q_p/Z_p with denominator dividing p^depth."""
    return [Fraction(k, p**depth) for k in range(p**depth)]


def enumerate_indices(p: int, gammas, depth: int) -> list:
    return [WaveletIndex(p, g, j, a) for g, j, a in product(gammas, range(1, p), enumerate_shifts(p, depth))]


@dataclass(frozen=True)
class EigenReport:
    index: WaveletIndex
    alpha: complex
    eigenvalue: complex
    residual: float

    def ok(self, tol: float = 1e-10) -> bool:
        return self.residual <= tol


def eigencheck(idx: WaveletIndex, alpha) -> EigenReport:
    """sup |D^alpha Theta - p^(alpha(1-gamma)) Theta| / sup |Theta|."""
    alpha = complex(alpha)
    theta = kozyrev(idx)
    lam = ppow(idx.p, alpha * (1 - idx.gamma))
    out = apply(taibleson(idx.p, 1, alpha), theta, LizorkinKind.SECOND)
    res = np.max(np.abs(out.coeffs - lam * theta.coeffs)) / np.max(np.abs(theta.coeffs))
    return EigenReport(idx, alpha, complex(lam), float(res))


def inner(phi: TestFunction, psi: TestFunction) -> complex:
    g = common_grid(phi.grid, psi.grid)
    a = regrid(phi, g.l, g.N).coeffs
    b = regrid(psi, g.l, g.N).coeffs
    return complex(np.vdot(b, a)) * float(g.cell_measure)


def gram(indices) -> np.ndarray:
    """Matrix of L^2 inner products <Theta_i, Theta_k> on one common grid."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        raise DomainError("wavelet indices must be distinct")
    thetas = [kozyrev(i) for i in indices]
    g = common_grid(*(t.grid for t in thetas))
    rows = np.array([regrid(t, g.l, g.N).coeffs.reshape(-1) for t in thetas])
    # einsum rather than BLAS so the result does not depend on thread count
    return np.einsum("ik,jk->ij", rows, rows.conj()) * float(g.cell_measure)


def parse_index(p: int, gamma: int, j: int, a: str | Fraction = "0") -> WaveletIndex:
    return WaveletIndex(p, int(gamma), int(j), PRational.from_value(p, as_fraction(a)).value)
