from fractions import Fraction

import numpy as np
import pytest

from padic_calculus.asymptotics import Automodel, quasi_limit, verify_th5, verify_th7_th8, verify_th9, verify_th10
from padic_calculus.core import Grid, MultCharacter, NormedCharacter
from padic_calculus.distributions import (abs_power, delta, fourier_dist, multi_riesz, pi_alpha, pi_alpha_log,
                                          riesz_kappa)
from padic_calculus.errors import DegenerateError, DomainError, HypothesisError, LizorkinError, SymbolError
from padic_calculus.lizorkin import random_lizorkin
from padic_calculus.operators import custom, taibleson
from padic_calculus.schwartz import indicator_ball, omega, random_function, regrid
from padic_calculus.special import gamma_p, gamma_p_char

P = 3
TRIV, TAME = NormedCharacter(P), NormedCharacter(P, 1)


def test_automodel_values():
    rho = Automodel(P, 0.5, TRIV, 2)
    assert rho(Fraction(1, 9)) == pytest.approx(9 ** -0.5 * 4)
    assert rho(Fraction(9)) == pytest.approx(9 ** 0.5 * 4)
    assert rho.degree == MultCharacter(0.5, TRIV)
    custom_rho = Automodel(P, fn=lambda t: 2.0, declared=MultCharacter(1, TRIV))
    assert custom_rho(5) == 2 and custom_rho.degree.alpha == 1
    with pytest.raises(DomainError):
        Automodel(P, m=-1)


@pytest.mark.parametrize("pi1", [TRIV, TAME])
def test_homogeneous_sequence_is_constant(pi1, rng):
    f = pi_alpha(MultCharacter(0.5, pi1))
    phi = random_function(Grid(P, 1, -2, 1), rng)
    rep = quasi_limit(f, Automodel(P, 0.5, pi1), phi, K=6)
    v = f.pair(phi)
    assert rep.stabilized
    assert max(abs(s - v) for s in rep.values) <= 1e-12 * max(1, abs(v))


def test_delta_limit_is_value_at_zero(rng):
    phi = random_function(Grid(2, 1, -1, 1), rng)
    rep = quasi_limit(delta(2), Automodel(2, 0.0), phi, K=5)
    assert rep.stabilized and rep.limit == pytest.approx(phi.coeffs[0])


@pytest.mark.parametrize("pi1", [TRIV, TAME])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_log_family_two_sided(pi1, m, rng):
    # f_m -> f_0 at infinity, and -> (-1)^m f_0 at zero under the inverse automodel, at rate O(1/k)
    f = pi_alpha_log(MultCharacter(0.5, pi1), m)
    phi = random_function(Grid(P, 1, -2, 1), rng)
    v = pi_alpha_log(MultCharacter(0.5, pi1), 0).pair(phi)
    K = 40
    at_inf = quasi_limit(f, Automodel(P, 0.5, pi1, m), phi, "infinity", K=K)
    at_zero = quasi_limit(f, Automodel(P, 1.5, pi1.inverse(), m), phi, "zero", K=K)
    for rep, target in ((at_inf, v), (at_zero, (-1) ** m * v)):
        errs = [abs(s - target) for s in rep.values]
        scaled = [e * k for e, k in zip(errs, rep.ks)]
        assert max(scaled[9:]) <= 2 * max(scaled[9:19])  # k |s_k - limit| stays bounded
        assert errs[-1] < 0.5 * errs[9]
        # the sign is visible: s_K is closer to target than to -target
        assert abs(rep.limit - target) < abs(rep.limit + target)
    assert not at_inf.stabilized  # log-rate convergence is reported, not hidden


def test_degenerate_automodel(rng):
    phi = random_function(Grid(P, 1, -1, 1), rng)
    with pytest.raises(DegenerateError):
        quasi_limit(delta(P), Automodel(P, fn=lambda t: 0.0, declared=MultCharacter(0, TRIV)), phi, K=3)
    with pytest.raises(DomainError):
        quasi_limit(delta(P), Automodel(P, 0.0), phi, K=2)
    with pytest.raises(DomainError):
        quasi_limit(delta(P), Automodel(P, 0.0), phi, direction="sideways")


def test_report_json(rng):
    phi = random_function(Grid(P, 1, -1, 1), rng)
    obj = quasi_limit(delta(P), Automodel(P, 0.0), phi, K=3).to_json_obj()
    assert [r["k"] for r in obj["table"]] == [1, 2, 3] and obj["stabilized"] is True


@pytest.mark.parametrize("f,rho", [(delta(P), Automodel(P, 0.0)),
                                   (pi_alpha(MultCharacter(0.5, TRIV)), Automodel(P, 0.5)),
                                   (pi_alpha_log(MultCharacter(0.5, TAME), 2), Automodel(P, 0.5, TAME, 2))])
def test_th5_per_scale(f, rho, rng):
    phi = random_lizorkin(Grid(P, 1, -2, 2), "second", rng)
    assert verify_th5(f, rho, phi, range(1, 7)).max_residual <= 1e-10


def test_fourier_transform_degree_at_zero(rng):
    # F[pi_alpha] = Gamma(pi_alpha) |xi|^(-alpha), with quasi-asymptotics of degree pi_(alpha+1)^(-1) at zero
    alpha = 0.5
    phi = random_function(Grid(P, 1, -2, 1), rng)
    Ff = fourier_dist(pi_alpha(MultCharacter(alpha, TRIV)))
    G = gamma_p(P, alpha).unwrap()
    rhs = abs_power(P, 1, 1 - alpha).scaled(G)
    assert abs(Ff.pair(phi) - rhs.pair(phi)) <= 1e-12 * max(1, abs(rhs.pair(phi)))
    # F[f](x / t) = |t|^alpha F[f](x): constant at zero under the automodel of degree pi_(alpha+1)
    rho = Automodel(P, alpha + 1)
    rep = quasi_limit(Ff, rho, phi, "zero", K=4)
    assert rep.stabilized


@pytest.mark.parametrize("beta", [0.0, 0.7, -1.0, 1 + 0.5j])
def test_th8(beta, rng):
    phi = random_lizorkin(Grid(2, 1, -2, 2), "second", rng)
    f = pi_alpha_log(MultCharacter(0.5, NormedCharacter(2)), 1)
    rep = verify_th7_th8(f, beta, Automodel(2, 0.5, m=1), phi, "second", range(1, 6))
    assert rep.max_residual <= 1e-10
    assert any(str(r[0]).startswith("kernel") for r in rep.rows)


@pytest.mark.parametrize("beta", [[-1, -1], [-1, 0.5], [0.3, 0.2]])
def test_th7_two_dimensional(beta, rng):
    phi = random_lizorkin(Grid(2, 2, -2, 1), "first", rng)
    rep = verify_th7_th8(multi_riesz(2, [0.5, 1.5]), beta, Automodel(2, 1.0), phi, "first", range(1, 5))
    assert rep.max_residual <= 1e-10


def test_th7_requires_membership(rng):
    with pytest.raises(LizorkinError):
        verify_th7_th8(delta(2), 0.5, Automodel(2, 0.0), omega(2), "second")
    phi = random_lizorkin(Grid(2, 2, -1, 1), "first", rng)
    with pytest.raises(DomainError):
        verify_th7_th8(delta(2, 2), [1, 2, 3], Automodel(2, 0.0), phi, "first")


@pytest.mark.parametrize("pi1", [TRIV, TAME])
def test_th9_constant(pi1):
    C = 1.5
    rep = verify_th9(pi_alpha(MultCharacter(0.5, pi1)).scaled(C), Automodel(P, 0.5, pi1), 2, range(1, 7), C=C)
    expect = C * gamma_p_char(MultCharacter(0.5, pi1)).unwrap() / gamma_p_char(MultCharacter(2.5, pi1)).unwrap()
    assert rep.expected == pytest.approx(expect)
    assert rep.converged(1e-8)
    # the ratio is already exact at every scale for a homogeneous f
    assert max(abs(r[2] - expect) for r in rep.rows) <= 1e-8 * abs(expect)


def test_th9_delta():
    rep = verify_th9(delta(2).scaled(2.0), Automodel(2, 0.0), 2, range(1, 6), C=2.0)
    assert rep.expected == pytest.approx(2.0 / gamma_p(2, 2).unwrap())
    assert rep.converged()


def test_th9_hypotheses():
    f = pi_alpha(MultCharacter(0.5, TRIV))
    with pytest.raises(HypothesisError):
        verify_th9(f, Automodel(P, 0.5), 0)
    with pytest.raises(HypothesisError):
        verify_th9(riesz_kappa(2, 2, 0.5), Automodel(2, 0.5), 3)


def test_th10(rng):
    phi = random_lizorkin(Grid(P, 1, -2, 2), "second", rng)
    f = pi_alpha_log(MultCharacter(0.5, TAME), 1)
    rho = Automodel(P, 0.5, TAME, 1)
    A = custom(P, 1, lambda xi: 2.5 * float(xi.coords[0].norm) ** 0.7, degree=MultCharacter(1.7, TRIV),
               symmetric=True, label="2.5|xi|^0.7")
    for sym in (taibleson(P, 1, 0.7), A):
        assert verify_th10(f, sym, rho, phi, range(1, 6)).max_residual <= 1e-10


def test_th10_rejects_wrong_degree(rng):
    phi = random_lizorkin(Grid(P, 1, -2, 2), "second", rng)
    wrong = custom(P, 1, lambda xi: float(xi.coords[0].norm) ** 0.7, degree=MultCharacter(2.0, TRIV), symmetric=True)
    with pytest.raises(SymbolError):
        verify_th10(delta(P), wrong, Automodel(P, 0.0), phi)
    undeclared = custom(P, 1, lambda xi: 1.0, symmetric=True)
    with pytest.raises(SymbolError):
        verify_th10(delta(P), undeclared, Automodel(P, 0.0), phi)


def test_coarse_pairing_matches_refined(rng):
    # radial kernels pair on grids with l > 0 without refining
    phi = random_function(Grid(P, 1, 2, 4), rng)
    fine = regrid(phi, -1, phi.grid.N)
    for f in (pi_alpha_log(MultCharacter(0.5, TAME), 2), pi_alpha_log(MultCharacter(-0.5, TRIV), 1),
              abs_power(P, 1, 0.3), riesz_kappa(P, 1, 1)):
        a = f.pair(phi)
        b = complex(np.sum(f.weights(fine.grid) * fine.coeffs))
        assert abs(a - b) <= 1e-12 * max(1, abs(b))
    assert delta(P).pair(indicator_ball(P, 1, 3)) == 1
