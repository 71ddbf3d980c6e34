"""The acceptance suite: twelve numbered checks shared by the test-suite and
``padic selftest``.

Each check is seeded, so its report (rounded to three significant digits)
is reproducible byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .asymptotics import Automodel, verify_th5, verify_th7_th8, verify_th9, verify_th10
from .core import Grid, MultCharacter, NormedCharacter, PRational, PVector, unit_residue, valuation
from .distributions import (abs_power, character, check_homogeneity, constant, delta, log_abs, multi_riesz,
                            p_inv_abs_n, p_log_over_abs, pi_alpha, pi_alpha_log, riesz_f, riesz_kappa)
from .errors import PoleError, UnsolvableError
from .lizorkin import LizorkinKind, is_phi, is_psi, project, random_lizorkin
from .operators import apply, apply_dist, convolution_oracle, custom, poly, solve, taibleson, vladimirov
from .parallel import pmap
from .schwartz import (TestFunction, delta_k, dilate_arg, evaluate, fourier, indicator_ball, inverse_fourier,
                       l2_norm, omega, random_function, regrid)
from .special import gamma_p, gamma_p_n
from .wavelets import eigencheck, enumerate_indices, gram, kozyrev

__all__ = ["CriterionResult", "CRITERIA", "run", "run_all", "report_json"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.metrics.items())
        return f"criterion {self.number:2d} {verdict}  {self.title}  [{shown}]"

    def to_json_obj(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "metrics": {k: _jsonable(v) for k, v in self.metrics.items()}, "notes": list(self.notes)}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, float):
        return float(f"{v:.3g}")
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _sup(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _rel(a: TestFunction, b: TestFunction) -> float:
    return _sup(a.coeffs - b.coeffs) / max(_sup(b.coeffs), 1e-300)


# 1 --------------------------------------------------------------------------

FOURIER_GRIDS = [(2, 1, -3, 3), (2, 2, -2, 1), (3, 1, -2, 2), (3, 2, -1, 1), (5, 1, -2, 2), (5, 2, -1, 1)]


def naive_dft(phi: TestFunction) -> np.ndarray:
    """F[phi] by the defining sum: p^(nl) sum_m c_m chi_p(x_m . xi_k)."""
    g = phi.grid
    K = g.side
    # x_m = m p^-N, xi_k = k p^l: {x xi}_p = (m k mod K) / K
    idx = np.arange(K)
    E = np.exp(2j * np.pi * ((np.outer(idx, idx) % K) / K))
    out = phi.coeffs
    for ax in range(g.n):
        out = np.moveaxis(np.tensordot(E, np.moveaxis(out, ax, 0), axes=(1, 0)), 0, ax)
    return out * float(g.cell_measure)


def criterion_1() -> CriterionResult:
    rng = np.random.default_rng(101)
    worst = {"roundtrip": 0.0, "parseval": 0.0, "naive": 0.0}
    grid_law = True
    for p, n, l, N in FOURIER_GRIDS:
        g = Grid(p, n, l, N)
        for _ in range(3):
            phi = random_function(g, rng)
            F = fourier(phi)
            grid_law &= F.grid == Grid(p, n, -N, -l)
            back = inverse_fourier(F)
            grid_law &= back.grid == g
            worst["roundtrip"] = max(worst["roundtrip"], _sup(back.coeffs - phi.coeffs) / _sup(phi.coeffs))
            a, b = l2_norm(F) ** 2, l2_norm(phi) ** 2
            worst["parseval"] = max(worst["parseval"], abs(a - b) / b)
            worst["naive"] = max(worst["naive"], _sup(F.coeffs - naive_dft(phi)) / _sup(F.coeffs))
    ok = grid_law and all(v <= 1e-12 for v in worst.values())
    return CriterionResult(1, "Fourier correctness", ok, {**worst, "grid_law": grid_law})


# 2 --------------------------------------------------------------------------


def criterion_2() -> CriterionResult:
    exact = True
    for p in (2, 3, 5):
        for n in (1, 2):
            F = fourier(omega(p, n))
            exact &= F.grid == omega(p, n).grid and np.array_equal(F.coeffs, omega(p, n).coeffs)
            for k in (-2, -1, 1, 2):
                F = fourier(indicator_ball(p, n, k))
                d = delta_k(p, n, k)
                exact &= F.grid == d.grid and np.array_equal(F.coeffs, d.coeffs)
    rng = np.random.default_rng(202)
    worst = 0.0
    for i in range(20):
        p, n = [(2, 1), (3, 1), (2, 2), (3, 2)][i % 4]
        g = Grid(p, n, int(rng.integers(-2, 0)), int(rng.integers(0, 2)))
        phi = random_function(g, rng)
        unit = int(rng.choice([u for u in range(1, 2 * p) if u % p]))
        t = Fraction(unit) * Fraction(p) ** int(rng.integers(-2, 3))
        tn = float(abs(Fraction(p) ** (-valuation(t, p))) ** n)  # |t|^n
        lhs = fourier(dilate_arg(phi, 1 / t))  # F[phi(t x)]
        rhs = dilate_arg(fourier(phi), t)  # F[phi](xi / t)
        worst = max(worst, _sup(lhs.coeffs - rhs.coeffs / tn) / _sup(rhs.coeffs / tn))
        exact &= lhs.grid == rhs.grid
    return CriterionResult(2, "closed-form transforms and dilation law", exact and worst <= 1e-12,
                           {"bit_exact": exact, "dilation": worst})


# 3 --------------------------------------------------------------------------


def criterion_3() -> CriterionResult:
    rng = np.random.default_rng(303)
    worst = 0.0
    tried = 0
    for _ in range(100):
        p = int(rng.choice([2, 3, 5, 7]))
        a = complex(rng.uniform(-4, 4), rng.uniform(-3, 3))
        try:
            r1 = gamma_p(p, a).unwrap() * gamma_p(p, 1 - a).unwrap()
            n = int(rng.integers(1, 4))
            r2 = gamma_p_n(p, n, a).unwrap() * gamma_p_n(p, n, n - a).unwrap()
        except PoleError:
            continue
        tried += 1
        worst = max(worst, abs(r1 - 1), abs(r2 - 1))
    g22 = gamma_p(2, 2)
    g21 = [gamma_p_n(p, 2, 1) for p in (2, 3, 5, 7)]
    exact = g22.exact == Fraction(-4, 3) and all(v.exact == 1 for v in g21)
    poles = all(gamma_p(p, 0).is_pole and gamma_p_n(p, 3, 0).is_pole for p in (2, 3, 5, 7, 11))
    ok = worst <= 1e-12 and exact and poles and tried >= 95
    return CriterionResult(3, "Gamma identities", ok, {"reflection": worst, "samples": tried,
                                                        "exact_values": exact, "poles": poles})


# 4 --------------------------------------------------------------------------


def criterion_4() -> CriterionResult:
    rng = np.random.default_rng(404)
    worst = 0.0
    for p, n, l, N in ((2, 1, -3, 3), (3, 2, -1, 1)):
        g = Grid(p, n, l, N)
        for alpha in (0.5, 1.7, 2 + 0.3j):
            kern = abs_power(p, n, alpha)
            dual = abs_power(p, n, n - alpha)
            G = gamma_p_n(p, n, alpha).unwrap()
            for _ in range(20):
                phi = random_lizorkin(g, LizorkinKind.SECOND, rng)
                lhs = kern.pair(fourier(phi))
                rhs = G * dual.pair(phi)
                worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return CriterionResult(4, "Fourier transform of |x|^(alpha-n) as a pairing", worst <= 1e-9,
                           {"relative": worst})


# 5 --------------------------------------------------------------------------


def criterion_5() -> CriterionResult:
    rng = np.random.default_rng(505)
    worst = {"second": 0.0, "first": 0.0}
    cases = 0
    for i in range(50):
        p, n, l, N = [(2, 1, -3, 3), (3, 1, -2, 2), (2, 2, -2, 1), (3, 2, -1, 1)][i % 4]
        g = Grid(p, n, l, N)
        a = complex(rng.uniform(-2, 2), rng.uniform(-1, 1) if i % 3 == 0 else 0)
        b = complex(rng.uniform(-2, 2), 0)
        if i % 10 == 0:
            b = -n - a  # D^alpha D^beta = D^-n, the logarithmic kernel
        elif i % 10 == 5:
            b = n - a
        phi = random_lizorkin(g, LizorkinKind.SECOND, rng)
        s = _sup(phi.coeffs)
        A, B, AB = taibleson(p, n, a), taibleson(p, n, b), taibleson(p, n, a + b)
        d1 = _sup(apply(A, apply(B, phi)).coeffs - apply(AB, phi).coeffs) / s
        d2 = _sup(apply(A, apply(taibleson(p, n, -a), phi)).coeffs - phi.coeffs) / s
        worst["second"] = max(worst["second"], d1, d2)
        # first kind: Vladimirov with vector exponents
        phi = random_lizorkin(g, LizorkinKind.FIRST, rng)
        s = _sup(phi.coeffs)
        av = [complex(x) for x in rng.uniform(-2, 2, n)]
        bv = [complex(x) for x in rng.uniform(-2, 2, n)]
        if i % 10 == 0:
            bv = [-1 - x for x in av]
        V = lambda v: vladimirov(p, v)  # noqa: E731
        d1 = _sup(apply(V(av), apply(V(bv), phi, "first"), "first").coeffs
                  - apply(V([x + y for x, y in zip(av, bv)]), phi, "first").coeffs) / s
        d2 = _sup(apply(V(av), apply(V([-x for x in av]), phi, "first"), "first").coeffs - phi.coeffs) / s
        worst["first"] = max(worst["first"], d1, d2)
        cases += 1
    ok = all(v <= 1e-10 for v in worst.values())
    return CriterionResult(5, "operator group law", ok, {**worst, "triples": cases})


# 6 --------------------------------------------------------------------------


def criterion_6() -> CriterionResult:
    rng = np.random.default_rng(606)
    worst = 0.0
    checked = 0
    for p, n, l, N in ((2, 1, -3, 3), (3, 1, -2, 2), (2, 2, -2, 1)):
        g = Grid(p, n, l, N)
        for alpha in (-1.5, -0.5, 0, 0.5, 1, 2, -n):
            for _ in range(2):
                phi = random_lizorkin(g, LizorkinKind.SECOND, rng)
                A = apply(taibleson(p, n, alpha), phi)
                O = convolution_oracle(alpha, phi)
                A = regrid(A, O.grid.l, O.grid.N)
                worst = max(worst, _rel(O, A))
                checked += 1
    return CriterionResult(6, "Fourier multiplier against the kernel convolution", worst <= 1e-9,
                           {"relative": worst, "cases": checked})


# 7 --------------------------------------------------------------------------

KOZYREV_ALPHAS = (-2, -1, -0.5, 0.5, 1, 2, 1 + 1j)


def criterion_7() -> CriterionResult:
    eig = 0.0
    gram_err = 0.0
    norm_err = 0.0
    integral_exact = True
    count = 0
    for p, depth in ((2, 2), (3, 1)):
        idxs = enumerate_indices(p, range(-2, 3), depth)
        for idx in idxs:
            th = kozyrev(idx)
            integral_exact &= bool(is_phi(th, LizorkinKind.SECOND, tol=0.0))
            norm_err = max(norm_err, abs(l2_norm(th) - 1))
        jobs = [(i, a) for i in idxs for a in KOZYREV_ALPHAS]
        res = pmap(lambda ia: eigencheck(*ia).residual, jobs)
        eig = max(eig, max(res))
        count += len(jobs)
        G = gram(idxs)
        gram_err = max(gram_err, _sup(G - np.eye(len(idxs))))
    ok = eig <= 1e-10 and gram_err <= 1e-10 and integral_exact and norm_err <= 1e-12
    return CriterionResult(7, "Kozyrev wavelets", ok, {"eigen": eig, "gram": gram_err, "norm": norm_err,
                                                        "integral_exact": integral_exact, "eigenchecks": count})


# 8 --------------------------------------------------------------------------


def _leading_residue_symbol(p: int, n: int, alpha: float):
    """|xi|^alpha (2 + pi_1(leading unit of the largest coordinate)); not even in xi."""
    pi1 = NormedCharacter(p, 1)

    def fn(xi: PVector) -> complex:
        norms = [c.norm for c in xi.coords]
        top = max(norms)
        j = norms.index(top)
        r = unit_residue(xi.coords[j], p)
        base = float(top) ** alpha
        return base * (2 + pi1(r))

    return custom(p, n, fn, degree=None, symmetric=False, verify_constancy=True, label="|xi|^a(2+pi_1)")


def criterion_8() -> CriterionResult:
    rng = np.random.default_rng(808)
    worst = 0.0
    for p, n, l, N in ((2, 1, -3, 3), (3, 1, -2, 2), (3, 2, -1, 1)):
        g = Grid(p, n, l, N)
        cases = [(taibleson(p, n, 0.7), "second"), (taibleson(p, n, -1.3 + 0.5j), "second"),
                 (poly(p, n, [1, 0, 2], alpha=1), "second"), (poly(p, n, [2, 1, 0.5], alpha=0.5), "second"),
                 (vladimirov(p, [0.5] * n), "first"), (poly(p, n, [1, 3], alphas=[1.0] * n), "first")]
        for sym, kind in cases:
            for _ in range(3):
                gfun = random_lizorkin(g, kind, rng)
                f = solve(sym, gfun, kind)
                back = apply(sym, f, kind)
                worst = max(worst, _sup(back.coeffs - gfun.coeffs) / _sup(gfun.coeffs))
    rejected = False
    message = ""
    try:
        solve(poly(3, 1, [-2, 1], alpha=1), random_lizorkin(Grid(3, 1, -2, 2), "second", rng))
    except UnsolvableError as exc:
        message = str(exc)
        rejected = "P_N(z) ≠ 0 for all z > 0" in message
    prop = 0.0
    for i in range(20):
        p, n, l, N = [(3, 1, -2, 2), (3, 2, -1, 1)][i % 2]
        g = Grid(p, n, l, N)
        A = _leading_residue_symbol(p, n, 0.7)
        phi = random_lizorkin(g, "second", rng)
        coords = []
        while not coords or all(c == 0 for c in coords):
            coords = [int(rng.integers(0, p**3)) * Fraction(p) ** int(rng.integers(-2, 2)) for _ in range(n)]
        z = PVector(tuple(PRational.from_value(p, c) for c in coords))
        lhs = apply_dist(A, character(z)).pair(phi)
        rhs = A(-z) * evaluate(fourier(phi), z)
        prop = max(prop, abs(lhs - rhs) / max(1.0, abs(rhs)))
    ok = worst <= 1e-10 and rejected and prop <= 1e-10
    return CriterionResult(8, "solvers and the character eigen-identity", ok,
                           {"solve": worst, "positive_root_rejected": rejected, "character_identity": prop})


# 9 --------------------------------------------------------------------------


def homogeneity_catalog():
    p = 3
    triv = NormedCharacter(p)
    tame = NormedCharacter(p, 1)
    out = [
        ("delta n=1", delta(p, 1)), ("delta n=2", delta(p, 2)), ("constant", constant(p, 1, 2.5)),
        ("|x|^(0.6-1)", abs_power(p, 1, 0.6)), ("|x|^(-0.4+0.5i-2)", abs_power(p, 2, -0.4 + 0.5j)),
        ("pi_alpha trivial", pi_alpha(MultCharacter(0.5, triv))),
        ("pi_alpha tame", pi_alpha(MultCharacter(1.5, tame))),
        ("pi_alpha log^1", pi_alpha_log(MultCharacter(0.5, triv), 1)),
        ("pi_alpha log^2", pi_alpha_log(MultCharacter(-0.7, triv), 2)),
        ("pi_alpha tame log^2", pi_alpha_log(MultCharacter(0.5, tame), 2)),
        ("P(1/|x|)", p_log_over_abs(p, 1)), ("P(log|x|/|x|)", p_log_over_abs(p, 2)),
        ("P(log^2|x|/|x|)", p_log_over_abs(p, 3)),
        ("P(1/|x|^2)", p_inv_abs_n(p, 2)), ("ln|x| n=2", log_abs(p, 2)),
        ("kappa_0.5 n=1", riesz_kappa(p, 1, 0.5)), ("kappa_1.7 n=2", riesz_kappa(p, 2, 1.7)),
        ("kappa_n n=1", riesz_kappa(p, 1, 1)), ("kappa_n n=2", riesz_kappa(p, 2, 2)),
        ("f_-1.5", riesz_f(p, -1.5)),
        ("f_(1,0.5)", multi_riesz(p, [1, 0.5])), ("f_(1,1)", multi_riesz(p, [1, 1])),
    ]
    return p, out


def criterion_9() -> CriterionResult:
    p, cat = homogeneity_catalog()
    ts = [Fraction(p) ** k for k in range(-3, 4)] + [Fraction(2) * Fraction(p) ** k for k in (-1, 2)]
    worst = 0.0
    failing = []

    def one(job):
        i, (name, f) = job
        g = Grid(p, f.n, -2, 1) if f.n == 1 else Grid(p, f.n, -1, 1)
        local = np.random.default_rng([909, i])
        phis = [random_function(g, local) for _ in range(3)]
        return name, check_homogeneity(f, phis=phis, ts=ts).max_residual

    for name, r in pmap(one, enumerate(cat)):
        worst = max(worst, r)
        if r > 1e-10:
            failing.append(name)
    return CriterionResult(9, "homogeneity catalog", not failing,
                           {"max_residual": worst, "entries": len(cat)}, [f"fails: {n}" for n in failing])


# 10 -------------------------------------------------------------------------


def criterion_10() -> CriterionResult:
    rng = np.random.default_rng(1010)
    p = 3
    g = Grid(p, 1, -2, 2)
    ks = range(1, 9)
    worst = {"th5": 0.0, "th7": 0.0, "th8": 0.0, "th10": 0.0}
    family = []
    for pi1 in (NormedCharacter(p), NormedCharacter(p, 1)):
        for m in (0, 1, 2):
            family.append((pi_alpha_log(MultCharacter(0.5, pi1), m), Automodel(p, 0.5, pi1, m)))
    family.append((delta(p, 1), Automodel(p, 0.0)))
    A_custom = custom(p, 1, lambda xi: 2.5 * float(xi.coords[0].norm) ** 0.7, degree=MultCharacter(1.7, NormedCharacter(p)),
                      symmetric=True, label="2.5|xi|^0.7")
    for f, rho in family:
        phi = random_lizorkin(g, "second", rng)
        worst["th5"] = max(worst["th5"], verify_th5(f, rho, phi, ks).max_residual)
        for beta in (0.5, -1):  # -1 = -n: logarithmic kernel
            worst["th8"] = max(worst["th8"], verify_th7_th8(f, beta, rho, phi, "second", ks).max_residual)
        worst["th7"] = max(worst["th7"], verify_th7_th8(f, [-1], rho, phi, "first", ks).max_residual)
        for sym in (taibleson(p, 1, 0.7), A_custom):
            worst["th10"] = max(worst["th10"], verify_th10(f, sym, rho, phi, ks).max_residual)
    # two-dimensional first kind with beta_j = -1 components
    g2 = Grid(2, 2, -2, 1)
    f2 = multi_riesz(2, [0.5, 1.5])
    for beta in ([-1, -1], [-1, 0.5]):
        phi = random_lizorkin(g2, "first", rng)
        worst["th7"] = max(worst["th7"], verify_th7_th8(f2, beta, Automodel(2, 1.0), phi, "first", range(1, 6)).max_residual)
    th9 = {}
    for label, pi1 in (("trivial", NormedCharacter(p)), ("tame", NormedCharacter(p, 1))):
        C = 1.5
        rep = verify_th9(pi_alpha(MultCharacter(0.5, pi1)).scaled(C), Automodel(p, 0.5, pi1), 2, ks, C=C)
        th9[f"th9_{label}"] = rep.error
    ok = all(v <= 1e-10 for v in worst.values()) and all(v <= 1e-8 for v in th9.values())
    return CriterionResult(10, "Tauberian per-scale identities", ok, {**worst, **th9})


# 11 -------------------------------------------------------------------------


def criterion_11() -> CriterionResult:
    rng = np.random.default_rng(1111)
    agree = 0
    members = 0
    total = 0
    grids = [Grid(2, 1, -3, 2), Grid(3, 1, -2, 2), Grid(2, 2, -2, 1), Grid(3, 2, -1, 1)]
    for kind in (LizorkinKind.FIRST, LizorkinKind.SECOND):
        for i in range(100):
            g = grids[i % 4]
            phi = random_lizorkin(g, kind, rng) if i % 2 == 0 else random_function(g, rng, integer=True)
            a = bool(is_phi(phi, kind))
            b = bool(is_psi(fourier(phi), kind))
            agree += a == b
            members += a
            total += 1
    proj_exact = True
    for kind in (LizorkinKind.FIRST, LizorkinKind.SECOND):
        for i in range(20):
            g = grids[i % 4]
            phi = random_function(g, rng)
            t = Fraction(g.p) ** -int(rng.integers(0, 3))
            proj_exact &= bool(is_phi(project(phi, kind, t), kind))
    dists = [project(omega(2), "second", Fraction(1, 2**k), return_distance=True)[1] for k in (1, 2, 3, 4)]
    decreasing = all(a > b for a, b in zip(dists, dists[1:]))
    ratio_ok = all(abs(b / a - 2**-0.5) < 1e-12 for a, b in zip(dists, dists[1:]))
    ok = agree == total and proj_exact and decreasing and ratio_ok
    return CriterionResult(11, "Lizorkin machinery", ok, {"duality": f"{agree}/{total}", "members": members,
                                                          "projection_exact": proj_exact,
                                                          "distances": [float(d) for d in dists]})


# 12 -------------------------------------------------------------------------


def criterion_12() -> CriterionResult:
    import os

    old = os.environ.get("PADIC_THREADS")
    outs = []
    try:
        for cap in ("1", "3"):
            os.environ["PADIC_THREADS"] = cap
            outs.append(report_json([criterion_2(), criterion_9(), criterion_11()]))
    finally:
        if old is None:
            os.environ.pop("PADIC_THREADS", None)
        else:
            os.environ["PADIC_THREADS"] = old
    same = outs[0] == outs[1]
    return CriterionResult(12, "deterministic reports", same, {"identical_under_thread_caps": same})


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run(numbers=None) -> list:
    numbers = sorted(numbers) if numbers else list(CRITERIA)
    return [CRITERIA[i]() for i in numbers]


run_all = run


def report_json(results) -> str:
    obj = {"criteria": [r.to_json_obj() for r in results], "passed": all(r.passed for r in results)}
    return json.dumps(obj, sort_keys=True)
