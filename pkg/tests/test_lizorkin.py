from fractions import Fraction

import numpy as np
import pytest

from padic_calculus.core import Grid
from padic_calculus.errors import DomainError
from padic_calculus.lizorkin import LizorkinKind, fiber_integrals, is_phi, is_psi, project, random_lizorkin
from padic_calculus.schwartz import TestFunction, fourier, indicator_ball, omega, random_function

FIRST, SECOND = LizorkinKind.FIRST, LizorkinKind.SECOND


@pytest.mark.parametrize("text,kind", [("first", FIRST), ("1", FIRST), ("Second", SECOND), ("taibleson", SECOND)])
def test_kind_parse(text, kind):
    assert LizorkinKind.parse(text) is kind


def test_kind_parse_rejects():
    with pytest.raises(DomainError):
        LizorkinKind.parse("third")


@pytest.mark.parametrize("p,n", [(2, 1), (3, 2), (5, 2), (2, 3)])
@pytest.mark.parametrize("kind", [FIRST, SECOND])
def test_random_members_are_exact_on_both_sides(p, n, kind, rng):
    phi = random_lizorkin(Grid(p, n, -1, 1), kind, rng)
    assert is_phi(phi, kind)
    assert is_psi(fourier(phi), kind, tol=1e-12 * phi.sup_norm())


@pytest.mark.parametrize("n", [1, 2])
def test_first_kind_is_inside_second_kind(n, rng):
    phi = random_lizorkin(Grid(3, n, -1, 1), FIRST, rng)
    assert is_phi(phi, SECOND)


def test_second_kind_member_need_not_be_first_kind():
    g = Grid(2, 2, 0, 1)
    c = np.zeros(g.shape, dtype=complex)
    c[0, 0], c[1, 1] = 1, -1
    phi = TestFunction(g, c)
    assert is_phi(phi, SECOND)
    rep = is_phi(phi, FIRST)
    assert not rep and rep.witness[0] == 1
    assert "x_1" in rep.describe()


def test_nonmember_witness():
    rep = is_phi(omega(3), SECOND)
    assert not rep and rep.value == pytest.approx(1)
    rep = is_psi(omega(3, 2), FIRST)
    assert not rep and rep.witness == (0, 0)


def test_fiber_integrals():
    phi = indicator_ball(2, 2, 1)
    fib = fiber_integrals(phi, 0)
    assert fib.shape == (phi.grid.side,)
    assert np.allclose(fib, 2.0)


@pytest.mark.parametrize("kind", [FIRST, SECOND])
@pytest.mark.parametrize("n", [1, 2])
def test_projection_lands_in_space_and_converges(kind, n, rng):
    phi = random_function(Grid(3, n, -1, 0), rng)
    dists = []
    for k in range(1, 5):
        out, d = project(phi, kind, Fraction(1, 3**k), return_distance=True)
        assert is_phi(out, kind)
        assert is_psi(fourier(out), kind, tol=1e-12 * phi.sup_norm())
        dists.append(d)
    assert all(b < a for a, b in zip(dists, dists[1:]))
    assert dists[-1] < 0.15 * phi.sup_norm()


def test_projection_distance_for_omega():
    # removing the B_k-mean of Omega leaves p^(-k/2) of its L^2 mass
    for k in range(1, 5):
        _, d = project(omega(2), SECOND, Fraction(1, 2**k), return_distance=True)
        assert d == pytest.approx(2 ** (-k / 2), rel=1e-12)


def test_projection_fixes_members_supported_in_the_ball(rng):
    # phi in Phi with support in B_k has zero mean on every coset of B_k
    phi = random_lizorkin(Grid(2, 1, -2, 1), SECOND, rng)
    out = project(phi, SECOND, Fraction(1, 2))
    assert out.grid == phi.grid
    assert np.array_equal(out.coeffs, phi.coeffs)


def test_projection_rejects_zero_scale():
    with pytest.raises(DomainError):
        project(omega(2), SECOND, 0)
