"""Quasi-asymptotics of distributions and per-scale checks of the Tauberian
theorems.

Scales run through the value group: t_k = p^-k, so |t_k| = p^k.  Every
check below is a change-of-variables identity that must hold at each k;
``quasi_limit`` additionally watches the normalized sequence settle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Grid, MultCharacter, NormedCharacter, PVector, as_fraction, valuation
from .distributions import Distribution, dilate, fourier_dist, multi_riesz, riesz_kappa
from .errors import DegenerateError, DomainError, HypothesisError, LizorkinError, SymbolError
from .lizorkin import LizorkinKind, is_phi
from .operators import Symbol, apply, apply_dist, taibleson, vladimirov
from .schwartz import TestFunction, fourier, regrid
from .special import gamma_p_char

__all__ = [
    "Automodel",
    "LimitReport",
    "IdentityReport",
    "Th9Report",
    "quasi_limit",
    "verify_th5",
    "verify_th7_th8",
    "verify_th9",
    "verify_th10",
]


@dataclass
class Automodel:
    """rho(t) = |t|^(alpha-1) pi_1(t) log_p^m |t|, or a custom function of declared degree."""

    p: int
    alpha: complex = 1.0
    pi1: NormedCharacter | None = None
    m: int = 0
    fn: object = None
    declared: MultCharacter | None = None

    def __post_init__(self):
        self.alpha = complex(self.alpha)
        if self.pi1 is None:
            self.pi1 = NormedCharacter(self.p)
        if self.m < 0:
            raise DomainError("log power must be >= 0")

    @property
    def degree(self) -> MultCharacter:
        if self.declared is not None:
            return self.declared
        return MultCharacter(self.alpha, self.pi1)

    def __call__(self, t) -> complex:
        tq = as_fraction(t)
        if self.fn is not None:
            return complex(self.fn(tq))
        g = -valuation(tq, self.p)
        return complex(MultCharacter(self.alpha, self.pi1)(tq)) * g**self.m

    def __str__(self):
        if self.fn is not None:
            return f"custom automodel of degree {self.degree}"
        s = f"|t|^({_c(self.alpha - 1)})"
        if not self.pi1.is_trivial:
            s += f"*{self.pi1}(t)"
        if self.m:
            s += f"*log_p^{self.m}|t|"
        return s


def _cpow(p, y) -> complex:
    return complex(math.cos(y * math.log(p)), math.sin(y * math.log(p)))


def _c(z: complex) -> str:
    return f"{z.real:g}" if z.imag == 0 else f"{z.real:g}{z.imag:+g}i"


def _scale(p: int, k: int) -> Fraction:
    """t with |t|_p = p^k."""
    return Fraction(p) ** (-k)


@dataclass
class LimitReport:
    ks: list
    values: list
    stabilized: bool
    limit: complex
    residuals: list
    direction: str = "infinity"

    def to_json_obj(self, digits: int = 15) -> dict:
        return {
            "direction": self.direction,
            "table": [{"k": k, "s_k": _cjson(v, digits)} for k, v in zip(self.ks, self.values)],
            "residuals": [_round(r, digits) for r in self.residuals],
            "stabilized": self.stabilized,
            "limit": _cjson(self.limit, digits),
        }


def quasi_limit(f: Distribution, rho: Automodel, phi: TestFunction, direction: str = "infinity",
                K: int = 8, tol: float = 1e-9, window: int = 3) -> LimitReport:
    """s_k = <f(t_k x), phi> / rho(t_k) (direction infinity) or <f(x / t_k), phi> / rho(t_k)
    (direction zero), |t_k| = p^k, k = 1..K."""
    if K < window:
        raise DomainError(f"need K >= {window}")
    if direction not in ("infinity", "zero"):
        raise DomainError("direction must be 'infinity' or 'zero'")
    p = f.p
    ks, vals = [], []
    for k in range(1, K + 1):
        t = _scale(p, k)
        r = rho(t)
        if r == 0:
            raise DegenerateError(f"automodel vanishes at |t| = p^{k}")
        arg = t if direction == "infinity" else 1 / t
        vals.append(dilate(f, arg).pair(phi) / r)
        ks.append(k)
    res = [abs(vals[i] - vals[i - 1]) for i in range(1, len(vals))]
    last = vals[-1]
    thresh = tol * max(1.0, abs(last))
    stable = all(r <= thresh for r in res[-(window - 1):])
    return LimitReport(ks, vals, stable, last, res, direction)


@dataclass
class IdentityReport:
    name: str
    rows: list = field(default_factory=list)  # (k, lhs, rhs, residual)

    @property
    def max_residual(self) -> float:
        return max((r[3] for r in self.rows), default=0.0)

    def ok(self, tol: float = 1e-10) -> bool:
        return self.max_residual <= tol

    def add(self, k, lhs, rhs):
        res = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
        self.rows.append((k, complex(lhs), complex(rhs), float(res)))

    def to_json_obj(self, digits: int = 15) -> dict:
        return {
            "check": self.name,
            "table": [{"k": k, "lhs": _cjson(a, digits), "rhs": _cjson(b, digits), "residual": _round(r, digits)}
                      for k, a, b, r in self.rows],
            "max_residual": _round(self.max_residual, digits),
        }


def _round(x: float, digits: int) -> float:
    return float(f"{x:.{digits}g}")


def _cjson(z: complex, digits: int):
    z = complex(z)
    re = _round(z.real, digits) + 0.0
    if z.imag == 0:
        return re
    return [re, _round(z.imag, digits) + 0.0]


def verify_th5(f: Distribution, rho: Automodel, phi: TestFunction, k_range=range(1, 9)) -> IdentityReport:
    """<F[f](xi / t), phi> / (|t|^n rho(t)) = <f(t x), F[phi]> / rho(t)."""
    Ff = fourier_dist(f)
    F_phi = fourier(phi)
    rep = IdentityReport("th5")
    for k in k_range:
        t = _scale(f.p, k)
        r = rho(t)
        lhs = dilate(Ff, 1 / t).pair(phi) / (float(f.p) ** (f.n * k) * r)
        rhs = dilate(f, t).pair(F_phi) / r
        rep.add(k, lhs, rhs)
    return rep


def _require(phi: TestFunction, kind: LizorkinKind):
    scale = float(np.sum(np.abs(phi.coeffs))) * float(phi.grid.cell_measure)
    rep = is_phi(phi, kind, tol=1e-12 * scale)
    if not rep:
        raise LizorkinError(f"test function is not in the {kind.value}-kind Lizorkin space ({rep.describe()})")


def _kernel_route(kernel: Distribution, t: Fraction, phi: TestFunction) -> TestFunction:
    """x -> <kernel(t y), phi(x + y)> on the grid of phi, one pairing per coset."""
    g = phi.grid
    dk = dilate(kernel, t)
    out = np.zeros(g.shape, dtype=complex)
    axes = tuple(range(g.n))
    for m in np.ndindex(*g.shape):
        shifted = np.roll(phi.coeffs, shift=tuple(-i for i in m), axis=axes)
        out[m] = dk.pair(TestFunction(g, shifted))
    return TestFunction(g, out)


def verify_th7_th8(f: Distribution, beta, rho: Automodel, phi: TestFunction, kind=LizorkinKind.SECOND,
                   k_range=range(1, 9), kernel_check: bool = True) -> IdentityReport:
    """<(D^beta f)(t x), phi> / (|t|^(-beta) rho(t)) = <f(t x), D^beta phi> / rho(t).

    Second kind uses the Taibleson operator with scalar beta; first kind the
    Vladimirov operator with a vector beta and |t|^(sum -beta_j).  With
    ``kernel_check`` the convolution kernel is also dilated directly and
    <kernel(t y), phi(x + y)> compared with |t|^(-beta-n) D^beta phi: this is
    where the log|t| terms of the degenerate kernels must drop out.
    """
    kind = LizorkinKind.parse(kind)
    _require(phi, kind)
    p, n = f.p, f.n
    if kind is LizorkinKind.SECOND:
        b = complex(beta)
        sym = taibleson(p, n, b)
        btot = b
        kernel = riesz_kappa(p, n, -b)
    else:
        bs = [complex(x) for x in (beta if np.ndim(beta) else [beta] * n)]
        if len(bs) != n:
            raise DomainError(f"beta needs {n} components")
        sym = vladimirov(p, bs)
        btot = sum(bs)
        kernel = multi_riesz(p, [-x for x in bs]) if n > 1 else riesz_kappa(p, 1, -bs[0])
    Df = apply_dist(sym, f, kind)
    Dphi = apply(sym, phi, kind)
    rep = IdentityReport("th7" if kind is LizorkinKind.FIRST else "th8")
    for k in k_range:
        t = _scale(p, k)
        tb = float(p) ** (-k * btot.real) * _cpow(p, -k * btot.imag)  # |t|^(-beta)
        r = rho(t)
        lhs = dilate(Df, t).pair(phi) / (tb * r)
        rhs = dilate(f, t).pair(Dphi) / r
        rep.add(k, lhs, rhs)
    if kernel_check:
        kr = IdentityReport("kernel scaling")
        for k in list(k_range)[:3]:
            t = _scale(p, k)
            # |t|^(-beta-n) with |t| = p^k
            fac = float(p) ** (k * (-btot.real - n)) * _cpow(p, -k * btot.imag)
            got = _kernel_route(kernel, t, phi).coeffs
            want = fac * regrid(Dphi, phi.grid.l, phi.grid.N).coeffs
            err = float(np.max(np.abs(got - want)))
            scale = max(1.0, float(np.max(np.abs(want))))
            kr.rows.append((k, complex(np.max(np.abs(got))), complex(np.max(np.abs(want))), err / scale))
        rep.rows.extend((f"kernel {k}", a, b, res) for k, a, b, res in kr.rows)
    return rep


@dataclass
class Th9Report:
    rows: list  # (k, y, ratio at radius p^(k-2), ratio at radius p^(k-3))
    limit: complex
    expected: complex | None
    error: float | None

    def converged(self, tol: float = 1e-8) -> bool:
        return self.error is not None and self.error <= tol

    def to_json_obj(self, digits: int = 15) -> dict:
        return {
            "check": "th9",
            "table": [{"k": k, "y": y, "ratio": _cjson(a, digits), "ratio_finer": _cjson(b, digits)}
                      for k, y, a, b in self.rows],
            "limit": _cjson(self.limit, digits),
            "expected": None if self.expected is None else _cjson(self.expected, digits),
            "error": None if self.error is None else _round(self.error, digits),
        }


def _probe(p: int, y: Fraction, r: int, k: int) -> TestFunction:
    """p^-r (1_{y + B_r} - 1_{p y + B_r}) on the grid (r, k)."""
    g = Grid(p, 1, r, k)
    c = np.zeros(g.shape, dtype=complex)
    h = float(Fraction(p) ** (-r))
    for x, s in ((y, 1.0), (p * y, -1.0)):
        idx = int((x * Fraction(p) ** k) % g.side)
        c[idx] += s * h
    return TestFunction(g, c)


def verify_th9(f: Distribution, rho: Automodel, N: int, k_range=range(1, 9), C=1.0,
               samples=None, tol: float = 1e-8) -> Th9Report:
    """Pointwise growth of the primitive D^-N f against |y|^N rho(y).

    D^-N f is a functional on Phi, so it is a function up to an additive
    constant; the probes measure u(y) - u(p y) through normalized indicators
    of two cells strictly inside the sphere of y, which is exact whenever u
    is constant on those cells.  The ratio is taken against the same
    difference of |y|^N rho(y).
    """
    if f.n != 1:
        raise HypothesisError("th9 is one-dimensional")
    alpha = rho.degree.alpha
    if not N > -alpha.real + 1:
        raise HypothesisError(f"need a positive integer N > -Re(alpha) + 1 = {-alpha.real + 1:g}, got N = {N}")
    p = f.p
    prim = apply_dist(taibleson(p, 1, -N), f)
    rows = []
    ks = list(k_range)
    ys = samples if samples is not None else [_scale(p, k) for k in ks]
    for y in ys:
        y = as_fraction(y)
        k = -valuation(y, p)
        den = _gauge(rho, y, N) - _gauge(rho, p * y, N)
        vals = []
        for r in (k - 2, k - 3):
            vals.append(prim.pair(_probe(p, y, r, k)) / den)
        if abs(vals[0] - vals[1]) > 1e-9 * max(1.0, abs(vals[0])):
            raise HypothesisError(f"primitive is not locally constant near y = {y} at the probe scale")
        rows.append((k, str(y), vals[0], vals[1]))
    limit = rows[-1][2] if rows else 0j
    expected = None
    if rho.fn is None and rho.m == 0:
        expected = C * _th9_constant(p, rho.degree, N)
    err = None if expected is None else abs(limit - expected) / max(1.0, abs(expected))
    return Th9Report(rows, limit, expected, err)


def _gauge(rho: Automodel, y: Fraction, N: int) -> complex:
    """|y|^N rho(y)."""
    k = -valuation(y, rho.p)
    return float(rho.p) ** (N * k) * rho(y)


def _th9_constant(p: int, deg: MultCharacter, N: int) -> complex:
    if deg.pi1.is_trivial and abs(deg.alpha) < 1e-12:
        # pi_alpha = pi_0: the limit is delta and D^-N delta = |x|^(N-1) / Gamma_p(N)
        return 1 / gamma_p_char(MultCharacter(N, deg.pi1)).unwrap()
    return gamma_p_char(deg).unwrap() / gamma_p_char(MultCharacter(deg.alpha + N, deg.pi1)).unwrap()


def _check_symbol_degree(sym: Symbol, grid: Grid, kind: LizorkinKind):
    if sym.degree is None:
        raise SymbolError(f"{sym} has no declared homogeneity degree")
    p = sym.p
    spec = grid.dual()
    live = [m for m in np.ndindex(*spec.shape)
            if not any(i == 0 for i in m) or (kind is LizorkinKind.SECOND and any(m))]
    for m in live[:: max(1, len(live) // 16)]:
        xi = PVector(spec.representative(m))
        for t in (Fraction(p), Fraction(1, p)):
            a = sym(PVector(tuple(c * t for c in xi.coords)))
            b = sym.degree(t) * sym(xi)
            if abs(a - b) > 1e-10 * max(1.0, abs(a)):
                raise SymbolError(f"{sym} is not homogeneous of degree {sym.degree}: defect at xi index {m}")


def verify_th10(f: Distribution, sym: Symbol, rho: Automodel, phi: TestFunction,
                k_range=range(1, 9), kind=LizorkinKind.SECOND) -> IdentityReport:
    """<(A f)(t x), phi> / (pi_beta(t)^-1 rho(t)) = <f(t x), A^T phi> / rho(t)."""
    kind = LizorkinKind.parse(kind)
    _require(phi, kind)
    _check_symbol_degree(sym, phi.grid, kind)
    Af = apply_dist(sym, f, kind)
    ATphi = apply(sym.transpose(), phi, kind)
    rep = IdentityReport("th10")
    for k in k_range:
        t = _scale(f.p, k)
        r = rho(t)
        lhs = dilate(Af, t).pair(phi) * sym.degree(t) / r
        rhs = dilate(f, t).pair(ATphi) / r
        rep.add(k, lhs, rhs)
    return rep
