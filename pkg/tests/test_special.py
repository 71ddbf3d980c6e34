import cmath
import math
from fractions import Fraction

import mpmath
import pytest

from padic_calculus.core import MultCharacter, NormedCharacter, chi
from padic_calculus.distributions import i0_log
from padic_calculus.errors import DomainError, PoleError
from padic_calculus.special import beta_p, gamma_p, gamma_p_char, gamma_p_n, product_character, root_sum


def test_gamma_rational_values():
    g = gamma_p(2, 2)
    assert g.exact == Fraction(-4, 3)
    assert g.format() == "-4/3 ≈ -1.333333333333333"
    assert gamma_p(3, 1).exact == 0
    assert gamma_p_n(2, 2, 1).exact == Fraction(1, 1)


@pytest.mark.parametrize("p", [2, 3, 7])
def test_gamma_poles(p):
    assert gamma_p(p, 0).is_pole
    assert gamma_p(p, 0).format() == "pole at 0"
    a = 2j * math.pi / math.log(p)
    assert gamma_p(p, a).is_pole
    with pytest.raises(PoleError):
        gamma_p(p, a).unwrap()


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("alpha", [0.3, 1.7 + 0.4j, -2.5, 0.5 - 3j])
def test_trivial_functional_equation(p, alpha):
    # Gamma_p(alpha) Gamma_p(1 - alpha) = 1
    v = gamma_p(p, alpha).unwrap() * gamma_p(p, 1 - alpha).unwrap()
    assert abs(v - 1) < 1e-12


def test_gamma_n_reduces_to_gamma():
    for a in (0.25, 2 + 1j):
        assert gamma_p_n(3, 1, a).unwrap() == pytest.approx(gamma_p(3, a).unwrap())
    with pytest.raises(DomainError):
        gamma_p_n(3, 0, 1)


def gauss_gamma(p, r, alpha):
    """Only the sphere |x| = p contributes: p^(alpha-1) sum_u pi_1(u) chi_p(u/p)."""
    pi1 = NormedCharacter(p, r)
    s = sum(pi1(Fraction(u)) * chi(Fraction(u, p), p) for u in range(1, p))
    return p ** (alpha - 1) * s


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (5, 2), (7, 3), (11, 4)])
@pytest.mark.parametrize("alpha", [0.5, 1.25 + 0.75j])
def test_tame_gamma_matches_gauss_sum(p, r, alpha):
    pi = MultCharacter(alpha, NormedCharacter(p, r))
    v = gamma_p_char(pi).unwrap()
    assert abs(v - gauss_gamma(p, r, alpha)) < 1e-12
    # |Gauss sum| = sqrt(p)
    assert abs(v) == pytest.approx(p ** (alpha.real - 1) * math.sqrt(p), rel=1e-12)


@pytest.mark.parametrize("p,r", [(5, 1), (7, 2)])
def test_tame_functional_equation(p, r):
    # Gamma(pi_alpha) Gamma(pi_{1-alpha} pi_1^{-1}) = pi_1(-1)
    pi = MultCharacter(0.3 + 0.2j, NormedCharacter(p, r))
    dual = MultCharacter(1 - pi.alpha, pi.pi1.inverse())
    lhs = gamma_p_char(pi).unwrap() * gamma_p_char(dual).unwrap()
    assert abs(lhs - pi.pi1(Fraction(-1))) < 1e-12


def test_root_sum_exact_zero():
    assert root_sum([Fraction(k, 7) for k in range(7)]) == 0
    assert root_sum([Fraction(1, 4), Fraction(3, 4)]) == 0
    assert root_sum([Fraction(0), Fraction(1, 2)], [2, 2]) == 0
    assert root_sum([Fraction(1, 3)]) == pytest.approx(cmath.exp(2j * math.pi / 3))


def test_beta_trivial():
    p = 3
    a, b = MultCharacter.trivial(p, 0.4), MultCharacter.trivial(p, 1.3)
    expect = gamma_p(p, 0.4).unwrap() * gamma_p(p, 1.3).unwrap() / gamma_p(p, 1.7).unwrap()
    assert beta_p(a, b) == pytest.approx(expect, rel=1e-14)
    assert product_character(a, b).alpha == pytest.approx(1.7)


def test_beta_symmetric_and_tame():
    p = 5
    a = MultCharacter(0.6, NormedCharacter(p, 1))
    b = MultCharacter(0.9 + 0.1j, NormedCharacter(p, 2))
    assert beta_p(a, b) == pytest.approx(beta_p(b, a), rel=1e-13)


def test_beta_pole_in_denominator():
    p = 2
    with pytest.raises(PoleError):
        beta_p(MultCharacter.trivial(p, 0.5), MultCharacter.trivial(p, 0.5))


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("m", [0, 1, 2, 3, 5])
@pytest.mark.parametrize("alpha", [0.7, -1.3 + 0.5j])
def test_i0_log_is_derivative_of_ball_integral(p, m, alpha):
    # I_0(alpha; m) = (ln p)^-m d^m/dalpha^m (1 - 1/p) / (1 - p^-alpha)
    mpmath.mp.dps = 30
    f = lambda a: (1 - mpmath.mpf(1) / p) / (1 - mpmath.power(p, -a))
    d = complex(mpmath.diff(f, mpmath.mpc(alpha), m)) / math.log(p) ** m
    assert abs(i0_log(p, alpha, m) - d) <= 1e-11 * max(1.0, abs(d))


def test_i0_log_pole():
    with pytest.raises(PoleError):
        i0_log(3, 0, 2)
