"""Fourier multipliers on Lizorkin test functions: fractional operators,
Laplacians, general pseudo-differential operators and their inverses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Grid, MultCharacter, NormedCharacter, PRational, PVector, norm_exponent
from .distributions import Distribution, riesz_kappa
from .errors import LizorkinError, NonInvertibleError, SymbolError, UnsolvableError
from .lizorkin import LizorkinKind, is_phi
from .schwartz import TestFunction, fourier, inverse_fourier, regrid, spectral_exponents

__all__ = [
    "Symbol",
    "taibleson",
    "vladimirov",
    "laplacian1",
    "laplacian2",
    "poly",
    "custom",
    "parse_symbol",
    "apply",
    "apply_dist",
    "compose",
    "inverse",
    "solve",
    "convolution_oracle",
    "killed_mask",
]

_NEG = -(10**9)  # exponent sentinel for a zero coordinate


def _axis_exponents(grid: Grid) -> list:
    """Per-axis norm exponents, broadcastable to grid.shape, zero index -> _NEG."""
    e = spectral_exponents(grid).astype(np.int64)
    e[0] = _NEG
    out = []
    for j in range(grid.n):
        shape = [1] * grid.n
        shape[j] = grid.side
        out.append(e.reshape(shape))
    return out


def _pow_arr(p: int, expo) -> np.ndarray:
    expo = np.asarray(expo, dtype=complex)
    if np.all(expo.imag == 0):
        return np.power(float(p), expo.real)
    return np.exp(expo * math.log(p))


def killed_mask(grid: Grid, kind: LizorkinKind) -> np.ndarray:
    """Spectral cosets where Lizorkin members vanish: the origin or the hyperplanes."""
    mask = np.zeros(grid.shape, dtype=bool)
    if kind is LizorkinKind.SECOND:
        mask[(0,) * grid.n] = True
        return mask
    for j in range(grid.n):
        sl = [slice(None)] * grid.n
        sl[j] = 0
        mask[tuple(sl)] = True
    return mask


@dataclass
class Symbol:
    """A symbol A(xi), locally constant on Q_p^n minus the origin.

    ``grid_eval(grid)`` returns the values at the canonical representatives
    of a Fourier-side grid (entries on killed cosets are ignored);
    ``point_eval(xi)`` evaluates at a single nonzero point.
    """

    p: int
    n: int
    kind: str
    params: dict
    grid_eval: object
    point_eval: object
    degree: MultCharacter | None = None
    first_kind_only: bool = False
    symmetric: bool = True
    verify_constancy: bool = False
    label: str = field(default="")

    def __str__(self):
        return self.label or self.kind

    def values(self, grid: Grid, kind: LizorkinKind) -> np.ndarray:
        mask = killed_mask(grid, kind)
        vals = np.array(self.grid_eval(grid, mask), dtype=complex)
        vals = np.broadcast_to(vals, grid.shape).copy()
        vals[mask] = 0
        return vals

    def __call__(self, xi) -> complex:
        if not isinstance(xi, PVector):
            xi = PVector.of(self.p, *(xi if isinstance(xi, (tuple, list)) else (xi,)))
        if norm_exponent(xi) is None:
            raise SymbolError("symbols are not evaluated at the origin")
        return complex(self.point_eval(xi))

    def transpose(self) -> Symbol:
        """The conjugate symbol A(-xi)."""
        if self.symmetric:
            return self
        base = self

        def geval(grid, mask):
            K = grid.side
            neg = (-np.arange(K)) % K
            vals = np.broadcast_to(np.asarray(base.grid_eval(grid, mask), dtype=complex), grid.shape)
            # A(-xi) at index m is A at index -m; the killed set is symmetric
            return vals[np.ix_(*([neg] * grid.n))]

        return Symbol(self.p, self.n, self.kind + "^T", dict(self.params), geval,
                      lambda xi: base.point_eval(-xi), self.degree, self.first_kind_only,
                      False, self.verify_constancy, f"({self})^T")


# Builtins


def _point_exps(xi: PVector) -> list:
    return [norm_exponent(c) for c in xi.coords]


def taibleson(p: int, n: int, alpha) -> Symbol:
    """|xi|^alpha (D^alpha)."""
    alpha = complex(alpha)

    def geval(grid, mask):
        e = _axis_exponents(grid)
        top = e[0]
        for a in e[1:]:
            top = np.maximum(top, a)
        top = np.where(top == _NEG, 0, top)
        return _pow_arr(p, alpha * top)

    def peval(xi):
        return _pow_arr(p, alpha * norm_exponent(xi)).item()

    return Symbol(p, n, "taibleson", {"alpha": alpha}, geval, peval,
                  degree=MultCharacter(alpha + 1, NormedCharacter(p)), label=f"|xi|^{_fmt(alpha)}")


def vladimirov(p: int, alphas) -> Symbol:
    """prod_j |xi_j|^alpha_j (D^alpha_x); first-kind spaces only."""
    alphas = tuple(complex(a) for a in alphas)
    n = len(alphas)

    def geval(grid, mask):
        e = _axis_exponents(grid)
        out = np.ones(grid.shape, dtype=complex)
        for a, ej in zip(alphas, e):
            out = out * _pow_arr(p, a * np.where(ej == _NEG, 0, ej))
        return out

    def peval(xi):
        ex = _point_exps(xi)
        if any(g is None for g in ex):
            raise SymbolError("Vladimirov symbol is not defined where a coordinate vanishes")
        return np.prod([_pow_arr(p, a * g).item() for a, g in zip(alphas, ex)])

    trivial = all(a == 0 for a in alphas)
    return Symbol(p, n, "vladimirov", {"alphas": alphas}, geval, peval,
                  degree=MultCharacter(sum(alphas) + 1, NormedCharacter(p)),
                  first_kind_only=not trivial, label="prod |xi_j|^(" + ",".join(_fmt(a) for a in alphas) + ")")


def laplacian1(p: int, n: int) -> Symbol:
    """-sum_k |xi_k|^2.  Not locally constant near the hyperplanes, so first kind only."""

    def geval(grid, mask):
        e = _axis_exponents(grid)
        out = np.zeros(grid.shape)
        for ej in e:
            out = out + np.where(ej == _NEG, 0.0, _pow_arr(p, 2 * np.where(ej == _NEG, 0, ej)).real)
        return -out

    def peval(xi):
        return -sum(float(p) ** (2 * g) for g in _point_exps(xi) if g is not None)

    return Symbol(p, n, "laplacian1", {}, geval, peval, degree=MultCharacter(3, NormedCharacter(p)),
                  first_kind_only=True, label="-sum |xi_k|^2")


def laplacian2(p: int, n: int) -> Symbol:
    s = taibleson(p, n, 2)
    s.kind = "laplacian2"
    base_g, base_p = s.grid_eval, s.point_eval
    s.grid_eval = lambda grid, mask: -base_g(grid, mask)
    s.point_eval = lambda xi: -base_p(xi)
    s.label = "-|xi|^2"
    return s


def poly(p: int, n: int, coeffs, alpha=None, alphas=None) -> Symbol:
    """P(z) = sum_k coeffs[k] z^k at z = |xi|^alpha or z = prod |xi_j|^alpha_j."""
    coeffs = tuple(complex(c) for c in coeffs)
    if (alpha is None) == (alphas is None):
        raise SymbolError("poly needs exactly one of alpha / alphas")
    base = taibleson(p, n, alpha) if alpha is not None else vladimirov(p, alphas)
    if alphas is not None and len(alphas) != n:
        raise SymbolError("alphas length must equal the dimension")

    def horner(z):
        out = np.zeros_like(np.asarray(z, dtype=complex))
        for c in reversed(coeffs):
            out = out * z + c
        return out

    def geval(grid, mask):
        return horner(np.asarray(base.grid_eval(grid, mask), dtype=complex))

    def peval(xi):
        return complex(horner(np.asarray(base.point_eval(xi), dtype=complex)))

    params = {"coeffs": coeffs}
    params.update({"alpha": complex(alpha)} if alpha is not None else {"alphas": base.params["alphas"]})
    return Symbol(p, n, "poly", params, geval, peval, degree=None,
                  first_kind_only=base.first_kind_only, label=f"P({base})")


def custom(p: int, n: int, fn, degree: MultCharacter | None = None, symmetric: bool = False,
           verify_constancy: bool = False, label: str = "custom") -> Symbol:
    """A user symbol ``fn(PVector) -> complex``, evaluated once per spectral coset."""

    def geval(grid, mask):
        out = np.zeros(grid.shape, dtype=complex)
        for m in zip(*np.nonzero(~mask)):
            xi = PVector(grid.representative(m))
            out[m] = fn(xi)
            if verify_constancy:
                _check_constancy(fn, grid, m, out[m])
        return out

    return Symbol(p, n, "custom", {}, geval, fn, degree=degree, symmetric=symmetric,
                  verify_constancy=verify_constancy, label=label)


def _check_constancy(fn, grid: Grid, m, value):
    base = grid.representative(m)
    p = grid.p
    for j in range(1, p):
        for ax in range(grid.n):
            shifted = list(base)
            # j p^(-l) has norm p^l, so it stays inside the cell
            shifted[ax] = shifted[ax] + PRational.from_value(p, j * Fraction(p) ** (-grid.l))
            v = fn(PVector(tuple(shifted)))
            if abs(v - value) > 1e-12 * max(1.0, abs(value)):
                raise SymbolError(f"symbol is not constant on the coset of {tuple(str(c) for c in base)}")


def _fmt(a: complex) -> str:
    return f"{a.real:g}" if a.imag == 0 else f"{a.real:g}{a.imag:+g}i"


def parse_symbol(spec: str, p: int, n: int) -> Symbol:
    """Parse "taibleson:alpha=0.5", "vladimirov:alphas=1,-1", "poly:coeffs=1,0,2;alpha=1",
    "laplacian1", "laplacian2"."""
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    kv = {}
    for part in filter(None, (s.strip() for s in rest.split(";"))):
        k, _, v = part.partition("=")
        kv[k.strip()] = v.strip()

    def cplx(s):
        return complex(s.replace("i", "j").replace("−", "-"))

    def vec(s):
        return [cplx(x) for x in s.split(",") if x.strip()]

    try:
        if name == "taibleson":
            return taibleson(p, n, cplx(kv["alpha"]))
        if name == "vladimirov":
            a = vec(kv["alphas"])
            if len(a) != n:
                raise SymbolError(f"vladimirov needs {n} exponents, got {len(a)}")
            return vladimirov(p, a)
        if name == "laplacian1":
            return laplacian1(p, n)
        if name == "laplacian2":
            return laplacian2(p, n)
        if name == "poly":
            coeffs = vec(kv["coeffs"])
            if "alphas" in kv:
                return poly(p, n, coeffs, alphas=vec(kv["alphas"]))
            return poly(p, n, coeffs, alpha=cplx(kv["alpha"]))
    except KeyError as exc:
        raise SymbolError(f"symbol spec {spec!r} is missing parameter {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, SymbolError):
            raise
        raise SymbolError(f"cannot parse symbol spec {spec!r}: {exc}") from exc
    raise SymbolError(f"unknown symbol {name!r}")


# Application


def _require(phi: TestFunction, kind: LizorkinKind, rtol: float):
    scale = float(np.sum(np.abs(phi.coeffs))) * float(phi.grid.cell_measure)
    rep = is_phi(phi, kind, tol=rtol * scale)
    if not rep:
        raise LizorkinError(f"input fails the {kind.value}-kind Lizorkin test ({rep.describe()})")


def apply(sym: Symbol, phi: TestFunction, kind=LizorkinKind.SECOND, rtol: float = 1e-10) -> TestFunction:
    """F^{-1}[A(xi) F[phi](xi)] for phi in the matching Lizorkin space."""
    kind = LizorkinKind.parse(kind)
    if sym.first_kind_only and kind is not LizorkinKind.FIRST:
        raise SymbolError(f"{sym} is only a multiplier on first-kind Lizorkin spaces")
    if (sym.p, sym.n) != (phi.p, phi.n):
        raise SymbolError("symbol and test function live on different spaces")
    _require(phi, kind, rtol)
    psi = fourier(phi)
    vals = sym.values(psi.grid, kind)
    data = np.array(psi.coeffs)
    data[killed_mask(psi.grid, kind)] = 0
    return inverse_fourier(TestFunction(psi.grid, vals * data))


def apply_dist(sym: Symbol, f: Distribution, kind=LizorkinKind.SECOND) -> Distribution:
    """<A f, phi> = <f, A^T phi>."""
    kind = LizorkinKind.parse(kind)
    st = sym.transpose()
    return Distribution(f.p, f.n, pair=lambda phi: f.pair(apply(st, phi, kind)), name=f"{sym}[{f.name}]")


def compose(a: Symbol, b: Symbol) -> Symbol:
    if (a.p, a.n) != (b.p, b.n):
        raise SymbolError("cannot compose symbols on different spaces")
    if a.kind == b.kind == "taibleson":
        return taibleson(a.p, a.n, a.params["alpha"] + b.params["alpha"])
    if a.kind == b.kind == "vladimirov":
        return vladimirov(a.p, [x + y for x, y in zip(a.params["alphas"], b.params["alphas"])])
    deg = None
    if a.degree is not None and b.degree is not None:
        deg = a.degree * b.degree
    return Symbol(a.p, a.n, "product", {}, lambda g, m: np.asarray(a.grid_eval(g, m)) * np.asarray(b.grid_eval(g, m)),
                  lambda xi: a.point_eval(xi) * b.point_eval(xi), deg,
                  a.first_kind_only or b.first_kind_only, a.symmetric and b.symmetric, label=f"{a}*{b}")


def inverse(a: Symbol) -> Symbol:
    if a.kind == "taibleson":
        return taibleson(a.p, a.n, -a.params["alpha"])
    if a.kind == "vladimirov":
        return vladimirov(a.p, [-x for x in a.params["alphas"]])

    def geval(grid, mask):
        v = np.broadcast_to(np.asarray(a.grid_eval(grid, mask), dtype=complex), grid.shape)
        bad = (np.abs(v) == 0) & ~mask
        if bad.any():
            m = tuple(int(i) for i in np.argwhere(bad)[0])
            xi = tuple(str(c) for c in grid.representative(m))
            raise NonInvertibleError(f"symbol {a} vanishes at xi = {xi}")
        out = np.zeros(grid.shape, dtype=complex)
        out[~mask] = 1 / v[~mask]
        return out

    def peval(xi):
        v = a.point_eval(xi)
        if v == 0:
            raise NonInvertibleError(f"symbol {a} vanishes at xi = {tuple(str(c) for c in xi.coords)}")
        return 1 / v

    deg = None if a.degree is None else a.degree.inverse()
    return Symbol(a.p, a.n, "inverse", {}, geval, peval, deg, a.first_kind_only, a.symmetric, label=f"1/({a})")


def _positive_roots(coeffs) -> list:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return []
    roots = np.roots(list(reversed(c)))
    return [complex(r) for r in roots if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) and r.real > 0]


def solve(sym: Symbol, g, kind=LizorkinKind.SECOND):
    """Solve A f = g through the inverse symbol."""
    kind = LizorkinKind.parse(kind)
    if sym.kind == "poly":
        bad = _positive_roots(sym.params["coeffs"])
        if bad:
            raise UnsolvableError(
                f'hypothesis "P_N(z) ≠ 0 for all z > 0" fails: P has the positive root z = {bad[0].real:.12g}')
    inv = inverse(sym)
    if isinstance(g, Distribution):
        return apply_dist(inv, g, kind)
    return apply(inv, g, kind)


def convolution_oracle(alpha, phi: TestFunction) -> TestFunction:
    """(D^alpha phi)(x) = <kappa_{-alpha}(y), phi(x - y)>, pointwise at every coset.

    Independent of the Fourier route: the kernel pairing is a weighted sum with
    the regularized kernel weights, evaluated for each output coset (O(M^2)).
    """
    _require(phi, LizorkinKind.SECOND, 1e-10)
    kern = riesz_kappa(phi.p, phi.n, -complex(alpha))
    g = phi.grid
    l = min(g.l, 0)
    f = regrid(phi, l, max(g.N, l))
    W = kern.weights(f.grid)
    c = f.coeffs
    out = np.zeros(f.grid.shape, dtype=complex)
    axes = tuple(range(g.n))
    # phi(x_m - y_m') has coefficient c[m - m'] as a function of y
    for mp in zip(*np.nonzero(W)):
        out += W[mp] * np.roll(c, shift=tuple(int(x) for x in mp), axis=axes)
    return TestFunction(f.grid, out)
