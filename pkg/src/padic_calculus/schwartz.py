"""Test functions on Q_p^n as coefficient tensors over cosets of B_l in B_N.

A function on grid (p, n, l, N) is stored as a dense complex array of shape
``(K,) * n`` with ``K = p**(N - l)``; entry ``m`` is the value on the coset
``m / p**N + B_l``.  The Fourier transform is a scaled DFT of size K along
every axis, evaluated by an in-house radix-p FFT.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .core import (
    Grid,
    PRational,
    PVector,
    as_fraction,
    norm_exponent,
    root_of_unity,
    unit_residue,
    valuation,
)
from .errors import DomainError, GridError

__all__ = [
    "TestFunction",
    "fourier",
    "inverse_fourier",
    "regrid",
    "coarsen",
    "common_grid",
    "dilate_arg",
    "translate",
    "add",
    "scale",
    "multiply_pointwise",
    "convolve",
    "integrate",
    "l2_norm",
    "evaluate",
    "indicator_ball",
    "delta_k",
    "omega",
    "indicator_coset",
    "random_function",
    "equal",
    "spectral_exponents",
]


def _pow(p: int, e: int) -> float:
    return float(Fraction(p) ** e)


class TestFunction:
    """A locally constant, compactly supported function on Q_p^n."""

    __test__ = False  # keep pytest from collecting the class

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid: Grid, coeffs=None):
        if coeffs is None:
            arr = np.zeros(grid.shape, dtype=complex)
        else:
            arr = np.array(coeffs, dtype=complex)
            if arr.shape != grid.shape:
                raise GridError(f"coefficient shape {arr.shape} does not match grid {grid}")
        arr.setflags(write=False)
        self.grid = grid
        self.coeffs = arr

    @classmethod
    def from_dict(cls, grid: Grid, entries: dict) -> TestFunction:
        arr = np.zeros(grid.shape, dtype=complex)
        for m, v in entries.items():
            m = (m,) if isinstance(m, int) else tuple(m)
            if len(m) != grid.n or any(not 0 <= mj < grid.side for mj in m):
                raise GridError(f"coset index {m} out of range for {grid}")
            arr[m] = v
        return cls(grid, arr)

    @classmethod
    def from_function(cls, grid: Grid, fn) -> TestFunction:
        """Sample ``fn(PVector)`` at the canonical coset representatives."""
        arr = np.zeros(grid.shape, dtype=complex)
        for m in product(range(grid.side), repeat=grid.n):
            arr[m] = fn(PVector(grid.representative(m)))
        return cls(grid, arr)

    @property
    def p(self) -> int:
        return self.grid.p

    @property
    def n(self) -> int:
        return self.grid.n

    def with_coeffs(self, coeffs) -> TestFunction:
        return TestFunction(self.grid, coeffs)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"TestFunction{self.grid} nnz={int(np.count_nonzero(self.coeffs))}"

    # JSON interchange

    def to_json_obj(self) -> dict:
        g = self.grid
        entries = []
        for m in zip(*np.nonzero(self.coeffs)):
            v = self.coeffs[m]
            entries.append({"m": [int(x) for x in m], "re": float(v.real) + 0.0, "im": float(v.imag) + 0.0})
        entries.sort(key=lambda e: e["m"])
        return {"p": g.p, "n": g.n, "l": g.l, "N": g.N, "coeffs": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> TestFunction:
        try:
            grid = Grid(int(obj["p"]), int(obj["n"]), int(obj["l"]), int(obj["N"]))
            entries = {tuple(e["m"]): complex(e.get("re", 0.0), e.get("im", 0.0)) for e in obj["coeffs"]}
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GridError):
                raise
            raise DomainError(f"malformed test-function JSON: {exc}") from exc
        return cls.from_dict(grid, entries)

    @classmethod
    def from_json(cls, text: str) -> TestFunction:
        return cls.from_json_obj(json.loads(text))


# Constructors


def indicator_ball(p: int, n: int, k: int) -> TestFunction:
    """Delta_k: the indicator of B_k."""
    g = Grid(p, n, k, k)
    return TestFunction(g, np.ones(g.shape))


def omega(p: int, n: int = 1) -> TestFunction:
    return indicator_ball(p, n, 0)


def delta_k(p: int, n: int, k: int) -> TestFunction:
    """delta_k(x) = p**(n k) Omega(p**k |x|), i.e. p**(n k) on B_{-k}."""
    g = Grid(p, n, -k, -k)
    return TestFunction(g, np.full(g.shape, _pow(p, n * k)))


def indicator_coset(center: PVector, k: int, grid: Grid | None = None) -> TestFunction:
    """Indicator of center + B_k, on ``grid`` or the tightest grid holding it."""
    p, n = center.p, center.n
    if grid is None:
        g = norm_exponent(center)
        N = k if g is None else max(k, g)
        grid = Grid(p, n, k, N)
    if grid.l > k:
        raise GridError(f"ball radius p^{k} is finer than grid constancy p^{grid.l}")
    return TestFunction.from_function(
        grid, lambda x: 1.0 if _in_ball(x, center, k) else 0.0
    )


def _in_ball(x: PVector, c: PVector, k: int) -> bool:
    for a, b in zip(x.coords, c.coords):
        d = norm_exponent(a - b)
        if d is not None and d > k:
            return False
    return True


# Point evaluation and integrals


def _coset_index(x, grid: Grid) -> int | None:
    q = as_fraction(x)
    if q != 0 and -valuation(q, grid.p) > grid.N:
        return None
    s = q * Fraction(grid.p) ** grid.N
    K = grid.side
    return (s.numerator * pow(s.denominator, -1, K)) % K if K > 1 else 0


def evaluate(phi: TestFunction, x) -> complex:
    if not isinstance(x, PVector):
        x = PVector.of(phi.p, *(x if isinstance(x, (tuple, list)) else (x,)))
    if x.p != phi.p or x.n != phi.n:
        raise DomainError("point and test function disagree on p or n")
    idx = []
    for c in x.coords:
        m = _coset_index(c, phi.grid)
        if m is None:
            return 0j
        idx.append(m)
    return complex(phi.coeffs[tuple(idx)])


def integrate(phi: TestFunction) -> complex:
    return complex(np.sum(phi.coeffs) * float(phi.grid.cell_measure))


def l2_norm(phi: TestFunction) -> float:
    return float(np.sqrt(np.sum(np.abs(phi.coeffs) ** 2) * float(phi.grid.cell_measure)))


# Fourier transform


@lru_cache(maxsize=64)
def _twiddles(K: int) -> np.ndarray:
    """exp(2 pi i j / K), j in [0, K), from exact rational phases."""
    tw = np.array([root_of_unity(Fraction(j, K)) for j in range(K)])
    tw.setflags(write=False)
    return tw


def _dft_last(x: np.ndarray, p: int, sign: int) -> np.ndarray:
    """Sum_m x[..., m] exp(sign 2 pi i m k / K) along the last axis, K = p**e."""
    K = x.shape[-1]
    if K == 1:
        return x.copy()
    tw = _twiddles(K)
    if sign < 0:
        tw = tw.conj()
    if K == p:
        r = np.arange(p)
        mat = tw[np.outer(r, r) % p]
        return x @ mat
    sub = K // p
    lead = x.shape[:-1]
    # m = p * m1 + r
    y = x.reshape(lead + (sub, p))
    y = np.swapaxes(y, -1, -2)  # (..., r, m1)
    y = _dft_last(np.ascontiguousarray(y), p, sign)  # (..., r, k1)
    r = np.arange(p)[:, None]
    k1 = np.arange(sub)[None, :]
    y = y * tw[(r * k1) % K]
    small = _twiddles(p) if sign > 0 else _twiddles(p).conj()
    fp = small[np.outer(np.arange(p), np.arange(p)) % p]  # [k2, r]
    out = np.einsum("ab,...bc->...ac", fp, y)  # (..., k2, k1)
    return out.reshape(lead + (K,))


def _dft_all(c: np.ndarray, p: int, sign: int) -> np.ndarray:
    out = c
    for ax in range(c.ndim):
        out = np.moveaxis(_dft_last(np.moveaxis(out, ax, -1), p, sign), -1, ax)
    return out


def _transform(c: np.ndarray, p: int, sign: int) -> np.ndarray:
    """Unscaled DFT with zero-frequency hyperplanes taken from fiber sums.

    Along each coordinate hyperplane xi_j = 0 the DFT equals the (n-1)-dim
    DFT of the sum over axis j; computing it that way keeps exact zeros
    exact, which the Lizorkin predicates rely on.
    """
    if c.ndim == 0:
        return c.copy()
    out = np.array(_dft_all(c, p, sign), dtype=complex)
    for j in range(c.ndim):
        fiber = np.sum(c, axis=j)
        sl = [slice(None)] * c.ndim
        sl[j] = 0
        out[tuple(sl)] = _transform(fiber, p, sign)
    return out


def fourier(phi: TestFunction) -> TestFunction:
    """F[phi](xi) = integral of chi_p(xi . x) phi(x); grid (l, N) -> (-N, -l)."""
    g = phi.grid
    scale_ = float(g.cell_measure)
    data = _transform(phi.coeffs, g.p, +1) * scale_
    return TestFunction(g.dual(), data)


def inverse_fourier(psi: TestFunction) -> TestFunction:
    g = psi.grid
    scale_ = float(g.cell_measure)
    data = _transform(psi.coeffs, g.p, -1) * scale_
    return TestFunction(g.dual(), data)


# Regridding


def _axis_map(p: int, l_old: int, N_old: int, l_new: int, N_new: int) -> np.ndarray:
    K_old = p ** (N_old - l_old)
    K_new = p ** (N_new - l_new)
    step = p ** (N_new - N_old)
    m = np.arange(K_new)
    idx = np.where(m % step == 0, (m // step) % K_old, K_old)
    return idx


def regrid(phi: TestFunction, l: int, N: int) -> TestFunction:
    """Refine to constancy l <= phi's and support N >= phi's (lossless)."""
    g = phi.grid
    if l > g.l or N < g.N:
        raise GridError(f"regrid to (l={l}, N={N}) would coarsen {g}; use coarsen")
    if (l, N) == (g.l, g.N):
        return phi
    new = Grid(g.p, g.n, l, N)
    idx = _axis_map(g.p, g.l, g.N, l, N)
    padded = np.pad(phi.coeffs, [(0, 1)] * g.n)
    data = padded[np.ix_(*([idx] * g.n))]
    return TestFunction(new, data)


def coarsen(phi: TestFunction, l: int, N: int, tol: float = 0.0) -> TestFunction:
    """Inverse of regrid; raises GridError if phi is not representable."""
    g = phi.grid
    if l < g.l or N > g.N:
        raise GridError(f"coarsen to (l={l}, N={N}) would refine {g}")
    new = Grid(g.p, g.n, l, N)
    # sample the new representatives in phi's index space
    K_new = new.side
    m = np.arange(K_new) * g.p ** (g.N - N) % g.side
    cand = TestFunction(new, phi.coeffs[np.ix_(*([m] * g.n))])
    back = regrid(cand, g.l, g.N)
    err = np.max(np.abs(back.coeffs - phi.coeffs)) if phi.coeffs.size else 0.0
    if err > tol:
        raise GridError(f"function is not constant at scale p^{l} with support in B_{N} (deviation {err:.3g})")
    return cand


def common_grid(*grids: Grid) -> Grid:
    p, n = grids[0].p, grids[0].n
    for g in grids[1:]:
        if (g.p, g.n) != (p, n):
            raise DomainError(f"incompatible grids {grids[0]} and {g}")
    return Grid(p, n, min(g.l for g in grids), max(g.N for g in grids))


def _lift(*fns: TestFunction):
    g = common_grid(*(f.grid for f in fns))
    return g, [regrid(f, g.l, g.N) for f in fns]


# Algebra


def add(phi: TestFunction, psi: TestFunction) -> TestFunction:
    g, (a, b) = _lift(phi, psi)
    return TestFunction(g, a.coeffs + b.coeffs)


def scale(phi: TestFunction, c) -> TestFunction:
    return TestFunction(phi.grid, phi.coeffs * complex(c))


def multiply_pointwise(phi: TestFunction, psi: TestFunction) -> TestFunction:
    g, (a, b) = _lift(phi, psi)
    return TestFunction(g, a.coeffs * b.coeffs)


def dilate_arg(phi: TestFunction, t) -> TestFunction:
    """x -> phi(x / t), exact coefficient permutation on grid (l+k, N+k)."""
    g = phi.grid
    tq = as_fraction(t)
    if tq == 0:
        raise DomainError("dilation by t = 0")
    k = -valuation(tq, g.p)
    new = Grid(g.p, g.n, g.l + k, g.N + k)
    K = g.side
    if K == 1:
        return TestFunction(new, phi.coeffs)
    u_inv = pow(unit_residue(tq, g.p, g.depth), -1, K)
    perm = (np.arange(K) * u_inv) % K
    return TestFunction(new, phi.coeffs[np.ix_(*([perm] * g.n))])


def translate(phi: TestFunction, a) -> TestFunction:
    """x -> phi(x - a)."""
    g = phi.grid
    if not isinstance(a, PVector):
        a = PVector.of(g.p, *(a if isinstance(a, (tuple, list)) else (a,)))
    if a.n != g.n or a.p != g.p:
        raise DomainError("shift and test function disagree on p or n")
    ga = norm_exponent(a)
    N = g.N if ga is None else max(g.N, ga)
    f = regrid(phi, g.l, N)
    shifts = []
    for c in a.coords:
        s = _coset_index(c, f.grid)
        shifts.append(0 if s is None else s)
    data = np.roll(f.coeffs, shift=tuple(shifts), axis=tuple(range(g.n)))
    return TestFunction(f.grid, data)


def convolve(phi: TestFunction, psi: TestFunction) -> TestFunction:
    """(phi * psi)(x) = integral of phi(y) psi(x - y) dy, as a direct sum."""
    g, (a, b) = _lift(phi, psi)
    out = np.zeros(g.shape, dtype=complex)
    axes = tuple(range(g.n))
    for m in zip(*np.nonzero(a.coeffs)):
        out += a.coeffs[m] * np.roll(b.coeffs, shift=tuple(int(x) for x in m), axis=axes)
    out *= float(g.cell_measure)
    res = TestFunction(g, out)
    l_out = max(phi.grid.l, psi.grid.l)
    tol = 1e-12 * max(1.0, res.sup_norm())
    return coarsen(res, l_out, g.N, tol=tol)


def equal(phi: TestFunction, psi: TestFunction, tol: float = 0.0) -> bool:
    """Equality after refinement to a common grid."""
    _, (a, b) = _lift(phi, psi)
    if not a.coeffs.size:
        return True
    return float(np.max(np.abs(a.coeffs - b.coeffs))) <= tol


def random_function(grid: Grid, rng: np.random.Generator, integer: bool = False, complex_: bool = True) -> TestFunction:
    if integer:
        re = rng.integers(-5, 6, size=grid.shape).astype(float)
        im = rng.integers(-5, 6, size=grid.shape).astype(float) if complex_ else 0.0
    else:
        re = rng.standard_normal(grid.shape)
        im = rng.standard_normal(grid.shape) if complex_ else 0.0
    return TestFunction(grid, re + 1j * im)


def spectral_exponents(grid: Grid) -> np.ndarray:
    """Per-axis norm exponents g with |m / p^N| = p^g, for m in [0, K).

    Index 0 gets the radius exponent of the zero coset, ``grid.l``.
    """
    K = grid.side
    out = np.empty(K, dtype=int)
    out[0] = grid.l
    for m in range(1, K):
        v = 0
        mm = m
        while mm % grid.p == 0:
            mm //= grid.p
            v += 1
        out[m] = grid.N - v
    return out


def representative(grid: Grid, m) -> tuple:
    return grid.representative(m)


def parse_point(p: int, text: str) -> PVector:
    """Comma-separated coordinates, each "num/p^exp" or an ordinary fraction "3/4"."""
    parts = [s.strip() for s in text.split(",") if s.strip()]
    if not parts:
        raise DomainError(f"empty point {text!r}")
    coords = []
    for s in parts:
        if "^" in s:
            coords.append(PRational.parse(s, p))
            continue
        try:
            q = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse p-adic rational {s!r}") from exc
        coords.append(PRational.from_value(p, q))
    return PVector(tuple(coords))
