import math
from fractions import Fraction

import numpy as np
import pytest

from padic_calculus.core import Grid, MultCharacter, NormedCharacter, PVector, norm_exponent
from padic_calculus.distributions import (abs_power, abs_power_direct, character, check_homogeneity, constant, delta,
                                          dilate, faulhaber, fourier_dist, log_abs, multi_riesz, p_inv_abs_n,
                                          p_log_over_abs, pi_alpha, pi_alpha_log, riesz_f, riesz_kappa)
from padic_calculus.errors import DomainError, PoleError
from padic_calculus.lizorkin import LizorkinKind, random_lizorkin
from padic_calculus.schwartz import (TestFunction, evaluate, fourier, indicator_ball, integrate, inverse_fourier, omega,
                                     random_function)
from padic_calculus.selftest import homogeneity_catalog


def test_delta_and_constant(rng):
    phi = random_function(Grid(3, 2, -1, 1), rng)
    assert delta(3, 2).pair(phi) == phi.coeffs[0, 0]
    assert constant(3, 2, 2.0).pair(phi) == pytest.approx(2 * integrate(phi))


def test_character_pairs_to_fourier_value(rng):
    p = 2
    phi = random_function(Grid(p, 1, -2, 2), rng)
    F = fourier(phi)
    for z in (Fraction(0), Fraction(3, 4), Fraction(5, 2), Fraction(12)):
        v = character(PVector.of(p, z)).pair(phi)
        assert abs(v - evaluate(F, z)) < 1e-12


def test_fourier_of_delta_is_one(rng):
    phi = random_function(Grid(5, 1, -1, 1), rng)
    assert fourier_dist(delta(5)).pair(phi) == pytest.approx(integrate(phi), abs=1e-12)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 2)])
@pytest.mark.parametrize("beta", [0.5, 2.0, 1.2 + 0.7j])
def test_continuation_agrees_with_convergent_integral(p, n, beta, rng):
    phi = random_function(Grid(p, n, -2 if n == 1 else -1, 1), rng)
    a = abs_power(p, n, beta).pair(phi)
    b = abs_power_direct(p, n, beta).pair(phi)
    assert abs(a - b) <= 1e-12 * max(1, abs(b))


def test_direct_needs_convergence():
    with pytest.raises(DomainError):
        abs_power_direct(2, 1, -0.5)


def test_abs_power_pole():
    with pytest.raises(PoleError):
        abs_power(3, 1, 0)


@pytest.mark.parametrize("m", [0, 1, 3])
def test_log_power_ball_integrals_by_sphere_sums(m):
    # <|x|^(alpha-1) log_p^m |x|, Omega(p^-l |x|)> = (1 - 1/p) sum_{g <= l} p^(g alpha) g^m
    p, alpha = 3, 1.5
    f = pi_alpha_log(MultCharacter.trivial(p, alpha), m)
    for l in (-1, 0, 2):
        direct = (1 - 1 / p) * math.fsum(p ** (g * alpha) * g**m for g in range(l, l - 200, -1))
        assert f.pair(indicator_ball(p, 1, l)) == pytest.approx(direct, rel=1e-12, abs=1e-14)


def test_log_abs_ball_integral():
    p = 2
    direct = (1 - 1 / p) * math.log(p) * math.fsum(g * p**g for g in range(0, -200, -1))
    assert log_abs(p).pair(omega(p)) == pytest.approx(direct, rel=1e-13)


def test_tame_kernel_has_no_mass_on_balls():
    f = pi_alpha(MultCharacter(0.5, NormedCharacter(5, 1)))
    for k in (-1, 0, 2):
        assert abs(f.pair(indicator_ball(5, 1, k))) < 1e-13


def test_pi_zero_is_rejected():
    with pytest.raises(PoleError):
        pi_alpha(MultCharacter.trivial(3, 0))


def test_principal_value_on_functions_vanishing_near_zero(rng):
    p = 3
    g = Grid(p, 1, -2, 2)
    c = random_function(g, rng).coeffs.copy()
    c[0] = 0  # phi vanishes on B_l, so no regularization is involved
    phi = TestFunction(g, c)
    for m in (1, 2):
        direct = 0j
        for k in range(1, g.side):
            x = Fraction(k) * Fraction(p) ** (-g.N)
            e = norm_exponent(x, p)
            direct += c[k] * (e ** (m - 1)) * float(p) ** (-e) * float(g.cell_measure)
        assert p_log_over_abs(p, m).pair(phi) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("p,n,alpha", [(p, n, a) for p, n in [(2, 1), (3, 1), (2, 2)]
                                         for a in (0.5, 1.3, -0.8, 2.0, 1.0) if a != n])
def test_riesz_kernel_symbol(p, n, alpha, rng):
    # <kappa_alpha, phi> = integral of |xi|^-alpha F^{-1}[phi](xi), phi in Phi
    phi = random_lizorkin(Grid(p, n, -2 if n == 1 else -1, 1), LizorkinKind.SECOND, rng)
    G = inverse_fourier(phi)
    total = 0j
    for idx in np.ndindex(G.grid.shape):
        if not any(idx):
            assert abs(G.coeffs[idx]) < 1e-12
            continue
        xs = [c.value for c in G.grid.representative(idx)]
        e = max(norm_exponent(x, p) for x in xs if x != 0)
        total += G.coeffs[idx] * float(p) ** (-alpha * e) * float(G.grid.cell_measure)
    assert abs(riesz_kappa(p, n, alpha).pair(phi) - total) <= 1e-11 * max(1, abs(total))


def test_kappa_at_zero_is_delta(rng):
    phi = random_function(Grid(2, 1, -1, 1), rng)
    assert riesz_kappa(2, 1, 0).pair(phi) == phi.coeffs[0]


def test_riesz_f_is_one_dimensional_kappa(rng):
    phi = random_function(Grid(3, 1, -1, 1), rng)
    assert riesz_f(3, 0.7).pair(phi) == riesz_kappa(3, 1, 0.7).pair(phi)


def test_multi_riesz_tensor():
    p = 2
    a = omega(p)
    prod = TestFunction(Grid(p, 2, 0, 0), np.ones((1, 1)))
    v = multi_riesz(p, [0.5, 1.5]).pair(prod)
    assert v == pytest.approx(riesz_f(p, 0.5).pair(a) * riesz_f(p, 1.5).pair(a))


def test_dilation_of_delta(rng):
    # delta(t x) = |t|^-n delta
    phi = random_function(Grid(3, 2, -1, 1), rng)
    t = Fraction(1, 9)
    assert dilate(delta(3, 2), t).pair(phi) == pytest.approx(phi.coeffs[0, 0] / 81)


def test_faulhaber():
    assert faulhaber(0) == [1]
    assert faulhaber(1) == [Fraction(1, 2), Fraction(1, 2)]
    c = faulhaber(3)
    assert sum(ci * 10 ** (j + 1) for j, ci in enumerate(c)) == sum(s**3 for s in range(1, 11))


def catalog_ids():
    return [name for name, _ in homogeneity_catalog()[1]]


@pytest.mark.parametrize("i", range(len(catalog_ids())), ids=catalog_ids())
def test_homogeneity_catalog(i, rng):
    p, cat = homogeneity_catalog()
    name, f = cat[i]
    g = Grid(p, f.n, -2, 1) if f.n == 1 else Grid(p, f.n, -1, 1)
    phis = [random_function(g, rng) for _ in range(2)]
    ts = [Fraction(1, 9), Fraction(1, 3), Fraction(3), Fraction(27), Fraction(2, 3)]
    assert check_homogeneity(f, phis=phis, ts=ts).max_residual <= 1e-10


def test_homogeneity_detects_wrong_degree(rng):
    f = abs_power(3, 1, 0.6)
    phis = [random_function(Grid(3, 1, -2, 1), rng)]
    rep = check_homogeneity(f, MultCharacter.trivial(3, 0.5), 0, [], phis=phis, ts=[Fraction(3)])
    assert rep.max_residual > 1e-3


def test_homogeneity_needs_companions(rng):
    with pytest.raises(DomainError):
        check_homogeneity(p_inv_abs_n(3, 1), MultCharacter.trivial(3, 0), 1, [], phis=[], ts=[])
