from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from padic_calculus.core import Grid, PVector, chi, norm
from padic_calculus.errors import DomainError, GridError
from padic_calculus.schwartz import (TestFunction, coarsen, convolve, delta_k, dilate_arg, equal, evaluate,
                                     fourier, indicator_ball, indicator_coset, integrate, inverse_fourier, l2_norm,
                                     multiply_pointwise, omega, parse_point, random_function, regrid,
                                     translate)


def brute_fourier(phi: TestFunction) -> TestFunction:
    """F[phi](xi) = sum over cells of chi(xi . x) phi(x) |cell|, evaluated with exact characters."""
    g = phi.grid
    dual = g.dual()
    out = np.zeros(dual.shape, dtype=complex)
    cells = list(product(range(g.side), repeat=g.n))
    reps = {m: [c.value for c in g.representative(m)] for m in cells}
    for k in product(range(dual.side), repeat=g.n):
        xi = [c.value for c in dual.representative(k)]
        out[k] = sum(phi.coeffs[m] * chi(sum(a * b for a, b in zip(xi, reps[m])), g.p) for m in cells)
    return TestFunction(dual, out * float(g.cell_measure))


@pytest.mark.parametrize("p,n,l,N", [(2, 1, -2, 3), (3, 1, -1, 2), (2, 2, -1, 1), (5, 1, -1, 1), (3, 2, 0, 1)])
def test_fourier_matches_defining_sum(p, n, l, N, rng):
    phi = random_function(Grid(p, n, l, N), rng)
    F = fourier(phi)
    B = brute_fourier(phi)
    assert F.grid == B.grid == Grid(p, n, -N, -l)
    assert np.max(np.abs(F.coeffs - B.coeffs)) <= 1e-12 * np.max(np.abs(B.coeffs))


@pytest.mark.parametrize("p,n,l,N", [(2, 1, -5, 4), (3, 2, -2, 1), (5, 2, -1, 1), (7, 1, -1, 2)])
def test_roundtrip_and_parseval(p, n, l, N, rng):
    phi = random_function(Grid(p, n, l, N), rng)
    F = fourier(phi)
    back = inverse_fourier(F)
    assert back.grid == phi.grid
    assert np.max(np.abs(back.coeffs - phi.coeffs)) <= 1e-12 * np.max(np.abs(phi.coeffs))
    assert abs(l2_norm(F) - l2_norm(phi)) <= 1e-12 * l2_norm(phi)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2])
def test_closed_forms_are_bit_exact(p, n):
    F = fourier(omega(p, n))
    assert F.grid == omega(p, n).grid
    assert np.array_equal(F.coeffs, omega(p, n).coeffs)
    for k in (-2, 1, 3):
        F = fourier(indicator_ball(p, n, k))
        assert F.grid == delta_k(p, n, k).grid
        assert np.array_equal(F.coeffs, delta_k(p, n, k).coeffs)


def test_integer_data_keeps_exact_dc_zero(rng):
    g = Grid(3, 2, -2, 1)
    c = rng.integers(-4, 5, g.shape).astype(complex)
    c[0, 0] -= c.sum()
    F = fourier(TestFunction(g, c))
    assert F.coeffs[0, 0] == 0


def test_translation_becomes_modulation(rng):
    p = 3
    phi = random_function(Grid(p, 1, -1, 1), rng)
    a = PVector.of(p, Fraction(2, 3))
    lhs = fourier(translate(phi, a))
    F = fourier(phi)
    for k in range(F.grid.side):
        xi = F.grid.representative((k,))[0].value
        assert abs(evaluate(lhs, xi) - chi(xi * Fraction(2, 3), p) * F.coeffs[k]) < 1e-12


def test_dilation_law(rng):
    for p, t in ((2, Fraction(3, 4)), (3, Fraction(9)), (5, Fraction(2, 25))):
        phi = random_function(Grid(p, 1, -2, 1), rng)
        lhs = fourier(dilate_arg(phi, 1 / t))  # F[phi(t x)]
        rhs = dilate_arg(fourier(phi), t)  # F[phi](xi / t)
        tn = float(norm(t, p))
        assert lhs.grid == rhs.grid
        assert np.allclose(lhs.coeffs, rhs.coeffs / tn, atol=1e-12)


def test_dilate_arg_pointwise(rng):
    p = 3
    phi = random_function(Grid(p, 1, -1, 1), rng)
    t = Fraction(1, 3)
    psi = dilate_arg(phi, t)
    for m in range(psi.grid.side):
        x = psi.grid.representative((m,))[0].value
        assert evaluate(psi, x) == evaluate(phi, x / t)


def test_regrid_is_lossless_and_coarsen_inverts(rng):
    phi = random_function(Grid(2, 2, -1, 1), rng)
    fine = regrid(phi, -3, 2)
    assert equal(fine, phi)
    assert abs(integrate(fine) - integrate(phi)) < 1e-12
    back = coarsen(fine, -1, 1)
    assert np.array_equal(back.coeffs, phi.coeffs)
    with pytest.raises(GridError):
        coarsen(random_function(Grid(2, 1, -2, 0), rng), -1, 0)


def test_evaluate_outside_support_is_zero():
    assert evaluate(omega(2), Fraction(1, 2)) == 0
    assert evaluate(omega(2), 6) == 1


def test_indicator_coset():
    f = indicator_coset(PVector.of(3, Fraction(1, 9)), -1)
    assert integrate(f) == pytest.approx(1 / 3)
    assert evaluate(f, Fraction(1, 9) + 3) == 1
    assert evaluate(f, Fraction(1, 9) + Fraction(1, 3)) == 0
    assert evaluate(f, Fraction(2, 9)) == 0


def test_convolution_theorem(rng):
    for p, n in ((2, 1), (3, 1), (2, 2)):
        a = random_function(Grid(p, n, -1, 1), rng)
        b = random_function(Grid(p, n, -2, 0), rng)
        lhs = fourier(convolve(a, b))
        rhs = multiply_pointwise(fourier(a), fourier(b))
        assert equal(lhs, rhs, tol=1e-12)


def test_json_roundtrip(rng):
    phi = random_function(Grid(3, 2, -1, 0), rng)
    back = TestFunction.from_json(phi.to_json())
    assert back.grid == phi.grid and np.array_equal(back.coeffs, phi.coeffs)
    assert TestFunction(Grid(2, 1, 0, 0), [-0.0]).to_json() == TestFunction.from_json(
        '{"p": 2, "n": 1, "l": 0, "N": 0, "coeffs": []}').to_json()


def test_coefficients_are_immutable(rng):
    phi = random_function(Grid(2, 1, 0, 1), rng)
    with pytest.raises(ValueError):
        phi.coeffs[0] = 1


def test_parse_point_forms():
    v = parse_point(2, "3/2^2, 5, 1/8")
    assert [c.value for c in v.coords] == [Fraction(3, 4), Fraction(5), Fraction(1, 8)]
    for bad in ("1/3", "", "x"):
        with pytest.raises(DomainError):
            parse_point(2, bad)
