"""Distributions as pairing functionals on test functions.

Every catalog entry is described by a weight tensor on a grid: for a test
function phi with coefficients c on grid (l, N),

    <f, phi> = sum_m W[m] c[m].

For a coset m != 0 the weight is the kernel integrated over the coset, which
is p^{nl} times the kernel value at the representative (|x|, pi_1 and log|x|
are constant on cosets strictly inside a sphere).  The zero coset B_l gets
the regularized integral of the kernel over B_l, obtained from the defining
formula by subtracting (l < 0) or adding (l > 0) the sphere integrals
between B_l and B_0.  Radial kernels therefore pair on coarse grids
directly, which keeps dilated test functions small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .core import Grid, MultCharacter, NormedCharacter, PVector, frac_part, norm_exponent, root_of_unity, valuation
from .errors import DomainError, PoleError
from .schwartz import TestFunction, dilate_arg, fourier, regrid
from .special import POLE_TOL, gamma_p_n

__all__ = [
    "Distribution",
    "Homogeneity",
    "HomogeneityReport",
    "delta",
    "constant",
    "character",
    "abs_power",
    "abs_power_direct",
    "pi_alpha",
    "pi_alpha_log",
    "p_log_over_abs",
    "p_inv_abs_n",
    "log_abs",
    "riesz_f",
    "multi_riesz",
    "riesz_kappa",
    "dilate",
    "fourier_dist",
    "check_homogeneity",
    "i0_log",
    "faulhaber",
]


@dataclass
class Homogeneity:
    """Advisory annotation: degree pi, order m and the lower-order companions."""

    degree: MultCharacter
    order: int = 0
    companions: list = field(default_factory=list)


class Distribution:
    """A linear functional on test functions over Q_p^n."""

    def __init__(self, p, n, weights=None, pair=None, name="f", meta=None, max_l=0):
        if (weights is None) == (pair is None):
            raise ValueError("give exactly one of weights/pair")
        self.p = p
        self.n = n
        self._weights = weights
        self._pair = pair
        self.name = name
        self.meta = meta
        self.max_l = max_l  # weights need constancy parameter l <= max_l

    def _ready(self, phi: TestFunction) -> TestFunction:
        if (phi.p, phi.n) != (self.p, self.n):
            raise DomainError(f"{self.name} lives on Q_{self.p}^{self.n}, test function on Q_{phi.p}^{phi.n}")
        g = phi.grid
        l = min(g.l, self.max_l)
        return regrid(phi, l, max(g.N, l))

    def weights(self, grid: Grid) -> np.ndarray:
        if self._weights is None:
            raise TypeError(f"{self.name} has no weight representation")
        if grid.l > self.max_l:
            raise DomainError(f"weights of {self.name} need l <= {self.max_l}")
        return self._weights(grid)

    @property
    def has_weights(self) -> bool:
        return self._weights is not None

    def pair(self, phi: TestFunction) -> complex:
        if self._pair is not None:
            return complex(self._pair(phi))
        f = self._ready(phi)
        return complex(np.sum(self._weights(f.grid) * f.coeffs))

    __call__ = pair

    def __add__(self, other: Distribution) -> Distribution:
        if (self.p, self.n) != (other.p, other.n):
            raise DomainError("cannot add distributions on different spaces")
        name = f"({self.name} + {other.name})"
        if self.has_weights and other.has_weights:
            return Distribution(self.p, self.n, weights=lambda g: self._weights(g) + other._weights(g),
                                name=name, max_l=min(self.max_l, other.max_l))
        return Distribution(self.p, self.n, pair=lambda phi: self.pair(phi) + other.pair(phi), name=name)

    def scaled(self, c) -> Distribution:
        c = complex(c)
        name = f"{_fmt(c)}*{self.name}"
        if self.has_weights:
            return Distribution(self.p, self.n, weights=lambda g: c * self._weights(g), name=name,
                                max_l=self.max_l)
        return Distribution(self.p, self.n, pair=lambda phi: c * self.pair(phi), name=name)

    def __rmul__(self, c):
        return self.scaled(c)

    def __repr__(self):
        return f"Distribution({self.name} on Q_{self.p}^{self.n})"


def _fmt(c: complex) -> str:
    return f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}i)"


# Grid helpers


def _axis_valuations(grid: Grid) -> np.ndarray:
    """v_p(m) for m in [0, K); v(0) is set to N - l so the zero index maps to B_l."""
    K, p = grid.side, grid.p
    v = np.zeros(K, dtype=np.int64)
    v[0] = grid.depth
    step = p
    while step < K:
        v[::step] += 1
        step *= p
    v[0] = grid.depth
    return v


def _sphere_exponents(grid: Grid) -> np.ndarray:
    """gamma(m) with |x_m| = p^gamma for m != 0; the zero coset gets l."""
    v = _axis_valuations(grid)
    vmin = np.full(grid.shape, grid.depth, dtype=np.int64)
    for j in range(grid.n):
        shape = [1] * grid.n
        shape[j] = grid.side
        vmin = np.minimum(vmin, v.reshape(shape))
    return grid.N - vmin


def _ppow_arr(p: int, expo) -> np.ndarray:
    expo = np.asarray(expo)
    if np.iscomplexobj(expo) and np.any(expo.imag != 0):
        return np.exp(expo * math.log(p))
    return np.power(float(p), expo.real.astype(float))


def _check_pole(p: int, alpha, what: str):
    if abs(1 - p ** (-complex(alpha))) < POLE_TOL:
        raise PoleError(f"{what} has a pole at alpha = {alpha}", str(alpha))


def _radial(grid: Grid, kernel, ball) -> np.ndarray:
    """Weights for a kernel depending on the sphere exponent only."""
    G = _sphere_exponents(grid)
    W = np.asarray(kernel(G), dtype=complex) * float(grid.cell_measure)
    W[(0,) * grid.n] = ball(grid.l)
    return W


def _ball_integral(i0, sphere, l: int):
    """Integral over B_l from the one over B_0 and the sphere integrals between."""
    if l <= 0:
        return i0 - sum(sphere(g) for g in range(l + 1, 1))
    return i0 + sum(sphere(g) for g in range(1, l + 1))


_ANY_L = 10**9  # radial weights are valid on every grid


def _sphere_measure(p: int, n: int, gamma) -> float:
    return (1 - float(p) ** (-n)) * float(p) ** (n * gamma)


# Catalog


def delta(p: int, n: int = 1) -> Distribution:
    def w(g):
        W = np.zeros(g.shape, dtype=complex)
        W[(0,) * g.n] = 1.0
        return W

    d = Distribution(p, n, weights=w, name="delta", max_l=_ANY_L)
    d.meta = Homogeneity(MultCharacter(1 - n, NormedCharacter(p)), 0)
    return d


def constant(p: int, n: int, c=1.0) -> Distribution:
    c = complex(c)
    d = Distribution(p, n, weights=lambda g: np.full(g.shape, c * float(g.cell_measure), dtype=complex),
                     name=f"const({_fmt(c)})", max_l=10**9)
    d.meta = Homogeneity(MultCharacter(1, NormedCharacter(p)), 0)
    return d


def character(z: PVector) -> Distribution:
    """The regular distribution x -> chi_p(z . x); pairs phi to F[phi](z)."""
    p, n = z.p, z.n
    gz = norm_exponent(z)
    lmax = 0 if gz is None else -gz

    def w(g):
        K = g.side
        scale = Fraction(p) ** (-g.N)
        axes = []
        for zj in z.coords:
            axes.append(np.array([frac_part(zj.value * m * scale, p) for m in range(K)], dtype=object))
        W = np.ones(g.shape, dtype=complex)
        for j, a in enumerate(axes):
            # phase of z_j x_j is additive over coordinates
            vals = np.array([root_of_unity(f) for f in a])
            shape = [1] * n
            shape[j] = K
            W = W * vals.reshape(shape)
        return W * float(g.cell_measure)

    return Distribution(p, n, weights=w, name="chi(z.x)", max_l=lmax)


def abs_power(p: int, n: int, beta) -> Distribution:
    """|x|^(beta - n), regularized at the origin (analytic continuation)."""
    beta = complex(beta)
    _check_pole(p, beta, "|x|^(beta-n)")
    i0 = (1 - float(p) ** (-n)) / (1 - p ** (-beta))

    def ball(l):
        return _ball_integral(i0, lambda g: _sphere_measure(p, n, g) * p ** (g * (beta - n)), l)

    d = Distribution(p, n, weights=lambda g: _radial(g, lambda G: _ppow_arr(p, G * (beta - n)), ball),
                     name=f"|x|^({_fmt(beta)}-{n})", max_l=_ANY_L)
    d.meta = Homogeneity(MultCharacter(beta - n + 1, NormedCharacter(p)), 0)
    return d


def abs_power_direct(p: int, n: int, beta, terms: int = 4000) -> Distribution:
    """|x|^(beta - n) as a plain integral, Re beta > 0 (summed sphere by sphere)."""
    beta = complex(beta)
    if beta.real <= 0:
        raise DomainError("the direct integral needs Re beta > 0")

    def ball(l):
        tot_re, tot_im = [], []
        for k in range(terms):
            g = l - k
            t = _sphere_measure(p, n, g) * p ** (g * (beta - n))
            tot_re.append(t.real)
            tot_im.append(t.imag)
            if abs(t) < 1e-300:
                break
        return complex(math.fsum(tot_re), math.fsum(tot_im))

    return Distribution(p, n, weights=lambda g: _radial(g, lambda G: _ppow_arr(p, G * (beta - n)), ball),
                        name=f"|x|^({_fmt(beta)}-{n}) direct", max_l=_ANY_L)


def _eulerian(m: int) -> list:
    return [sum((-1) ** j * comb(m + 1, j) * (k + 1 - j) ** m for j in range(k + 1)) for k in range(m)]


def i0_log(p: int, alpha, m: int) -> complex:
    """Integral over B_0 of |x|^(alpha-1) log_p^m |x| (continued analytically).

    Equals (1 - 1/p) (-1)^m sum_{k>=0} k^m z^k with z = p^(-alpha), summed
    through the Eulerian polynomial: sum k^m z^k = z A_m(z) / (1 - z)^(m+1).
    """
    z = p ** (-complex(alpha))
    if abs(1 - z) < POLE_TOL:
        raise PoleError(f"I_0(alpha; {m}) has a pole at alpha = {alpha}", str(alpha))
    if m == 0:
        s = 1 / (1 - z)
    else:
        s = z * sum(a * z**k for k, a in enumerate(_eulerian(m))) / (1 - z) ** (m + 1)
    return (1 - 1 / p) * (-1) ** m * s


def _unit_phase_values(grid: Grid, pi1: NormedCharacter) -> np.ndarray:
    """pi_1 at each 1-D coset representative m / p^N (1 at m = 0)."""
    p, K = grid.p, grid.side
    table = np.array([1.0 + 0j] + [root_of_unity(pi1.phase_of_residue(r)) for r in range(1, p)])
    m = np.arange(K)
    u = m.copy()
    u[0] = 1
    while True:
        mask = (u % p == 0)
        if not mask.any():
            break
        u[mask] //= p
    return table[u % p]


def pi_alpha_log(pi: MultCharacter, m: int = 0) -> Distribution:
    """pi_alpha(x) log_p^m |x| on Q_p, regularized at 0 by its B_0 integral."""
    p, alpha = pi.p, pi.alpha
    if m < 0:
        raise DomainError("log power must be >= 0")
    tame = not pi.pi1.is_trivial
    if not tame:
        i0 = i0_log(p, alpha, m)
    else:
        i0 = 0j

    def sphere(g):
        # integral over |x| = p^g of |x|^(alpha-1) pi_1 log^m; zero for tame pi_1
        return 0j if tame else (1 - 1 / p) * p ** (g * alpha) * g**m

    def ball(l):
        return _ball_integral(i0, sphere, l)

    def w(grid):
        G = _sphere_exponents(grid)
        W = _ppow_arr(p, G * (alpha - 1)) * (G.astype(float) ** m) * float(grid.cell_measure)
        W = np.asarray(W, dtype=complex)
        if tame:
            W = W * _unit_phase_values(grid, pi.pi1)
        W[0] = ball(grid.l)
        return W

    name = f"{pi}" + (f"*log_p^{m}|x|" if m else "")
    d = Distribution(p, 1, weights=w, name=name, max_l=_ANY_L)
    d.meta = Homogeneity(pi, m, [pi_alpha_log(pi, m - j).scaled(comb(m, j)) for j in range(1, m + 1)])
    return d


def pi_alpha(pi: MultCharacter) -> Distribution:
    if abs(pi.alpha) < POLE_TOL and pi.pi1.is_trivial:
        raise PoleError("pi_0 = |x|^-1 is not defined by the regularized formula; use p_inv_abs_n", "0")
    return pi_alpha_log(pi, 0)


def faulhaber(k: int) -> list:
    """Coefficients c_1..c_{k+1} with sum_{s=1}^L s^k = sum_j c_j L^j."""
    deg = k + 1
    xs = list(range(1, deg + 1))
    ys = [sum(Fraction(s) ** k for s in range(1, L + 1)) for L in xs]
    # Vandermonde solve without constant term (F(0) = 0)
    A = [[Fraction(x) ** j for j in range(1, deg + 1)] for x in xs]
    b = list(ys)
    for c in range(deg):
        piv = next(r for r in range(c, deg) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        b[c], b[piv] = b[piv], b[c]
        for r in range(deg):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * ac for a, ac in zip(A[r], A[c])]
                b[r] -= f * b[c]
    return [b[j] / A[j][j] for j in range(deg)]


def p_log_over_abs(p: int, m: int) -> Distribution:
    """P(log_p^(m-1)|x| / |x|) on Q_p: associated homogeneous of degree pi_0, order m."""
    if m < 1:
        raise DomainError("order m must be >= 1")

    def ball(l):
        return _ball_integral(0.0, lambda g: (1 - 1 / p) * g ** (m - 1), l)

    def w(grid):
        G = _sphere_exponents(grid)
        W = np.asarray(_ppow_arr(p, -G) * G.astype(float) ** (m - 1) * float(grid.cell_measure), dtype=complex)
        W[0] = ball(grid.l)
        return W

    d = Distribution(p, 1, weights=w, name=f"P(log_p^{m - 1}|x|/|x|)", max_l=_ANY_L)
    c = faulhaber(m - 1)
    comps = []
    for j in range(1, m + 1):
        part = delta(p, 1).scaled((1 - 1 / p) * float(c[j - 1]))
        if j <= m - 1:
            part = p_log_over_abs(p, m - j).scaled(comb(m - 1, j)) + part
        comps.append(part)
    d.meta = Homogeneity(MultCharacter(0, NormedCharacter(p)), m, comps)
    return d


def p_inv_abs_n(p: int, n: int) -> Distribution:
    """P(1/|x|^n): associated homogeneous of degree -n and order 1."""

    def ball(l):
        return _ball_integral(0.0, lambda g: 1 - float(p) ** (-n), l)

    d = Distribution(p, n, weights=lambda g: _radial(g, lambda G: _ppow_arr(p, -n * G), ball),
                     name=f"P(1/|x|^{n})", max_l=_ANY_L)
    d.meta = Homogeneity(MultCharacter(1 - n, NormedCharacter(p)), 1, [delta(p, n).scaled(1 - float(p) ** (-n))])
    return d


def log_abs(p: int, n: int = 1) -> Distribution:
    """The regular distribution ln|x|_p (natural logarithm)."""
    lnp = math.log(p)
    q = float(p) ** n

    def ball(l):
        # integral of ln|x| over B_l: (1 - p^-n) ln p sum_{g <= l} g q^g
        r = 1 / q
        s = q**l * (l / (1 - r) - r / (1 - r) ** 2)
        return (1 - r) * lnp * s

    d = Distribution(p, n, weights=lambda g: _radial(g, lambda G: G * lnp, ball), name="ln|x|", max_l=_ANY_L)
    d.meta = Homogeneity(MultCharacter(1, NormedCharacter(p)), 1, [constant(p, n, lnp)])
    return d


def riesz_kappa(p: int, n: int, alpha) -> Distribution:
    """kappa_alpha = |x|^(alpha-n) / Gamma_p^(n)(alpha), extended to alpha = 0 and n."""
    alpha = complex(alpha)
    lnp = math.log(p)
    if abs(alpha) < POLE_TOL:
        d = delta(p, n)
        d.name = "kappa_0"
        return d
    if abs(1 - p ** (alpha - n)) < POLE_TOL:
        if abs(alpha - n) < 1e-9:
            c = -(1 - float(p) ** (-n))
            d = log_abs(p, n).scaled(c / lnp)
            d.name = f"kappa_{n}"
            d.meta = Homogeneity(MultCharacter(1, NormedCharacter(p)), 1, [constant(p, n, c)])
            return d
        raise PoleError(f"kappa_alpha has a pole at alpha = {alpha}", str(alpha))
    if abs(1 - p ** (-alpha)) < POLE_TOL:
        raise PoleError(f"kappa_alpha is undefined at alpha = {alpha}", str(alpha))
    g = gamma_p_n(p, n, alpha).unwrap()
    d = abs_power(p, n, alpha).scaled(1 / g)
    d.name = f"kappa_{_fmt(alpha)}"
    d.meta = Homogeneity(MultCharacter(alpha - n + 1, NormedCharacter(p)), 0)
    return d


def riesz_f(p: int, alpha) -> Distribution:
    """One-dimensional Riesz kernel f_alpha = |x|^(alpha-1) / Gamma_p(alpha)."""
    d = riesz_kappa(p, 1, alpha)
    d.name = d.name.replace("kappa", "f")
    return d


def _tensor(parts: list, p: int, name: str) -> Distribution:
    n = len(parts)

    def w(g):
        g1 = Grid(p, 1, g.l, g.N)
        W = np.ones(g.shape, dtype=complex)
        for j, d in enumerate(parts):
            shape = [1] * n
            shape[j] = g.side
            W = W * d.weights(g1).reshape(shape)
        return W

    return Distribution(p, n, weights=w, name=name, max_l=min(d.max_l for d in parts))


def multi_riesz(p: int, alphas) -> Distribution:
    """f_alpha(x) = f_{alpha_1}(x_1) x ... x f_{alpha_n}(x_n)."""
    alphas = [complex(a) for a in alphas]
    n = len(alphas)
    parts = [riesz_f(p, a) for a in alphas]
    d = _tensor(parts, p, "f_(" + ",".join(_fmt(a) for a in alphas) + ")")
    S = [j for j, a in enumerate(alphas) if abs(a - 1) < 1e-12]
    c = -(1 - 1 / p)
    comps = []
    for i in range(1, len(S) + 1):
        acc = None
        for T in combinations(S, i):
            fac = [constant(p, 1, c) if j in T else parts[j] for j in range(n)]
            term = _tensor(fac, p, "companion")
            acc = term if acc is None else acc + term
        comps.append(acc)
    d.meta = Homogeneity(MultCharacter(sum(alphas) - n + 1, NormedCharacter(p)), len(S), comps)
    return d


# Operations


def dilate(f: Distribution, t) -> Distribution:
    """f(t x): <f(tx), phi> = |t|^(-n) <f, phi(x/t)>."""
    tq = Fraction(t.value) if hasattr(t, "value") else Fraction(t)
    if tq == 0:
        raise DomainError("dilation by t = 0")
    k = -valuation(tq, f.p)
    fac = float(Fraction(f.p) ** (-f.n * k))
    return Distribution(f.p, f.n, pair=lambda phi: fac * f.pair(dilate_arg(phi, tq)), name=f"{f.name}(t x)")


def fourier_dist(f: Distribution) -> Distribution:
    return Distribution(f.p, f.n, pair=lambda phi: f.pair(fourier(phi)), name=f"F[{f.name}]")


@dataclass
class HomogeneityReport:
    max_residual: float
    rows: list


def check_homogeneity(f: Distribution, pi: MultCharacter | None = None, m: int | None = None,
                      companions=None, phis=(), ts=()) -> HomogeneityReport:
    """Max over (phi, t) of the defect in
    <f(tx), phi> = pi(t) <f, phi> + sum_j pi(t) log_p^j |t| <f_{m-j}, phi>,
    scaled by max(1, |lhs|).
    """
    if pi is None or m is None or companions is None:
        if f.meta is None:
            raise DomainError(f"{f.name} carries no homogeneity annotation; pass pi, m and companions")
        pi = f.meta.degree if pi is None else pi
        m = f.meta.order if m is None else m
        companions = f.meta.companions if companions is None else companions
    if len(companions) != m:
        raise DomainError(f"order {m} needs {m} companions, got {len(companions)}")
    rows = []
    worst = 0.0
    for phi in phis:
        base = f.pair(phi)
        comp_vals = [c.pair(phi) for c in companions]
        for t in ts:
            tq = Fraction(t.value) if hasattr(t, "value") else Fraction(t)
            L = -valuation(tq, f.p)
            lhs = dilate(f, tq).pair(phi)
            rhs = pi(tq) * (base + sum(L**j * v for j, v in enumerate(comp_vals, start=1)))
            res = abs(lhs - rhs) / max(1.0, abs(lhs))
            worst = max(worst, res)
            rows.append((str(tq), lhs, rhs, res))
    return HomogeneityReport(worst, rows)
