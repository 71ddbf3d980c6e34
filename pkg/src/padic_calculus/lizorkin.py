"""Lizorkin spaces of the first kind (Phi_x, Psi_x) and second kind (Phi, Psi).

Membership on the x-side is a statement about integrals, which are finite
coefficient sums; they are evaluated with ``math.fsum`` so exact zeros stay
exact.  On the Fourier side membership is vanishing on the zero coset
(second kind) or on every coordinate hyperplane coset (first kind).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Grid, as_fraction, valuation
from .errors import DomainError
from .schwartz import TestFunction, l2_norm, regrid

__all__ = [
    "LizorkinKind",
    "MembershipReport",
    "is_phi",
    "is_psi",
    "project",
    "random_lizorkin",
    "fiber_integrals",
]


class LizorkinKind(enum.Enum):
    FIRST = "first"
    SECOND = "second"

    @classmethod
    def parse(cls, text) -> LizorkinKind:
        if isinstance(text, cls):
            return text
        t = str(text).strip().lower()
        if t in ("first", "1", "firstkind", "vladimirov"):
            return cls.FIRST
        if t in ("second", "2", "secondkind", "taibleson"):
            return cls.SECOND
        raise DomainError(f"unknown Lizorkin kind {text!r}")


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    criterion: str
    witness: tuple | None = None
    value: complex = 0j

    def __bool__(self):
        return bool(self.ok)

    def describe(self) -> str:
        if self.ok:
            return f"member ({self.criterion})"
        return f"not a member ({self.criterion}): witness {self.witness}, value {self.value:.6g}"


def _fsum_axis(c: np.ndarray, axis: int) -> np.ndarray:
    def fs(v):
        return complex(math.fsum(v.real), math.fsum(v.imag))

    moved = np.moveaxis(c, axis, -1)
    flat = moved.reshape(-1, moved.shape[-1])
    out = np.array([fs(row) for row in flat], dtype=complex)
    return out.reshape(moved.shape[:-1])


def fiber_integrals(phi: TestFunction, axis: int) -> np.ndarray:
    """Coefficients of the partial integral over x_axis (a function of the rest)."""
    return _fsum_axis(phi.coeffs, axis) * float(Fraction(phi.p) ** phi.grid.l)


def is_phi(phi: TestFunction, kind=LizorkinKind.SECOND, tol: float = 0.0) -> MembershipReport:
    kind = LizorkinKind.parse(kind)
    if tol < 0:
        raise DomainError("tolerance must be nonnegative")
    c = phi.coeffs
    if kind is LizorkinKind.SECOND:
        flat = c.reshape(-1)
        total = complex(math.fsum(flat.real), math.fsum(flat.imag)) * float(phi.grid.cell_measure)
        ok = bool(abs(total) <= tol)
        return MembershipReport(ok, "zero total integral", None if ok else ("integral",), total)
    for j in range(phi.n):
        fib = fiber_integrals(phi, j)
        if fib.ndim == 0:
            fib = fib.reshape(1)
        mags = np.abs(fib)
        worst = int(np.argmax(mags)) if mags.size else 0
        if mags.size and mags.flat[worst] > tol:
            idx = np.unravel_index(worst, fib.shape)
            return MembershipReport(False, f"zero partial integral in x_{j + 1}",
                                    (j + 1, tuple(int(i) for i in idx)), complex(fib.flat[worst]))
    return MembershipReport(True, "zero partial integral in every coordinate")


def is_psi(psi: TestFunction, kind=LizorkinKind.SECOND, tol: float = 0.0) -> MembershipReport:
    kind = LizorkinKind.parse(kind)
    c = psi.coeffs
    if kind is LizorkinKind.SECOND:
        v = complex(c[(0,) * psi.n])
        ok = bool(abs(v) <= tol)
        return MembershipReport(ok, "vanishes on the zero coset", None if ok else ((0,) * psi.n,), v)
    for j in range(psi.n):
        sl = [slice(None)] * psi.n
        sl[j] = 0
        plane = c[tuple(sl)]
        mags = np.abs(plane).reshape(-1)
        worst = int(np.argmax(mags))
        if mags[worst] > tol:
            idx = list(np.unravel_index(worst, plane.shape)) if plane.ndim else []
            idx.insert(j, 0)
            return MembershipReport(False, f"vanishes on the hyperplane xi_{j + 1} = 0",
                                    tuple(int(i) for i in idx), complex(plane.reshape(-1)[worst]))
    return MembershipReport(True, "vanishes on every coordinate hyperplane coset")


def _remove_block_mean(c: np.ndarray, axis: int, blocks: int) -> np.ndarray:
    """Subtract, along ``axis``, the mean over index classes m mod (K / blocks)."""
    K = c.shape[axis]
    moved = np.moveaxis(c, axis, -1)
    shaped = moved.reshape(moved.shape[:-1] + (blocks, K // blocks))
    mean = shaped.sum(axis=-2, keepdims=True) / blocks
    out = (shaped - mean).reshape(moved.shape)
    return np.moveaxis(out, -1, axis)


def project(phi: TestFunction, kind=LizorkinKind.SECOND, t=None, return_distance: bool = False):
    """Approximate phi by a Lizorkin function phi_t.

    On the Fourier side phi_t kills F^{-1}[phi] on B_{-k}, |t| = p^k (second
    kind), or on each slab |xi_j| <= p^{-k} (first kind).  On the x-side this
    is subtraction of the mean over cosets of B_k, taken over the whole ball
    or one coordinate at a time.
    """
    kind = LizorkinKind.parse(kind)
    tq = as_fraction(t)
    if tq == 0:
        raise DomainError("projection scale t must be nonzero")
    k = -valuation(tq, phi.p)
    g = phi.grid
    lo, hi = min(g.l, k), max(g.N, k)
    f = regrid(phi, lo, hi)
    blocks = phi.p ** (k - lo)
    c = np.array(f.coeffs)
    if kind is LizorkinKind.SECOND:
        # mean over x + B_k is the mean over the sub-blocks on every axis at once
        mean = c
        for ax in range(g.n):
            mean = mean - _remove_block_mean(mean, ax, blocks)
        c = c - mean
    else:
        for ax in range(g.n):
            c = _remove_block_mean(c, ax, blocks)
    if not is_phi(TestFunction(f.grid, c), kind):
        c = _exactify(c, kind)
    out = TestFunction(f.grid, c)
    if return_distance:
        return out, l2_norm(TestFunction(f.grid, c - f.coeffs))
    return out


_QUANT_BITS = 44


def _exactify_real(x: np.ndarray, kind: LizorkinKind) -> np.ndarray:
    top = float(np.max(np.abs(x))) if x.size else 0.0
    if top == 0.0:
        return x
    q = math.ldexp(1.0, math.frexp(top)[1] - _QUANT_BITS)
    dtype = np.int64 if x.size < 2**17 else object
    y = np.rint(x / q).astype(np.int64).astype(dtype)
    if kind is LizorkinKind.SECOND:
        y.flat[0] -= y.sum()
    else:
        # fixing axis j at slice 0 keeps earlier axes balanced: the residual
        # sums to zero along each of them
        for ax in range(y.ndim):
            r = y.sum(axis=ax)
            sl = [slice(None)] * y.ndim
            sl[ax] = 0
            y[tuple(sl)] -= r
    return y.astype(float) * q


def _exactify(c: np.ndarray, kind: LizorkinKind) -> np.ndarray:
    """Snap c to a fine dyadic lattice so the defining integrals vanish exactly.

    Block means with a non-dyadic divisor leave float residue; on the lattice
    all sums are exact integer arithmetic.  The change is below 2**-43 of
    max |c|.
    """
    return _exactify_real(c.real, kind) + 1j * _exactify_real(c.imag, kind)


def random_lizorkin(grid: Grid, kind, rng: np.random.Generator, complex_: bool = True) -> TestFunction:
    """Random member with small integer coefficients (so memberships are exact)."""
    kind = LizorkinKind.parse(kind)
    re = rng.integers(-5, 6, size=grid.shape).astype(float)
    im = rng.integers(-5, 6, size=grid.shape).astype(float) if complex_ else np.zeros(grid.shape)
    c = re + 1j * im
    if kind is LizorkinKind.SECOND:
        c[(0,) * grid.n] -= c.sum()
    else:
        for ax in range(grid.n):
            c = c - np.roll(c, 1, axis=ax)
    return TestFunction(grid, c)
