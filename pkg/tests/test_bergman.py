from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wco_lab.bergman import (
    SpaceParams,
    basis_enumerate,
    check_in_polydisk,
    inner_product,
    kernel_coeffs,
    kernel_eval,
    make_grid,
    monomial_norm_sq,
    quad_inner_product,
)
from wco_lab.errors import DomainError, UnderResolvedError, WcoError
from wco_lab.series import PowerSeries, constant, eval, monomial


def exact_norm_sq(alpha, ell):
    # Beta-integral closed form in exact rationals
    out = Fraction(1)
    for a, l in zip(alpha, ell):
        out *= Fraction(factorial(a) * factorial(l + 1), factorial(a + l + 1))
    return out


@pytest.mark.parametrize(
    "alpha, ell, expected",
    [((0,), (0,), 1.0), ((1,), (0,), 0.5), ((2,), (1,), 1 / 6)],
)
def test_norm_examples(alpha, ell, expected):
    assert monomial_norm_sq(alpha, SpaceParams.of(ell)) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("ell", [(0,), (2,), (1, 2), (0, 0)])
def test_norm_matches_exact_rationals(ell):
    sp = SpaceParams.of(ell)
    for alpha in basis_enumerate(8, sp):
        assert monomial_norm_sq(alpha, sp) == pytest.approx(float(exact_norm_sq(alpha, ell)), rel=1e-14)


def test_norm_monotone():
    for ell in range(3):
        vals = [monomial_norm_sq((n,), SpaceParams.of((ell,))) for n in range(12)]
        assert all(x > y for x, y in zip(vals, vals[1:]))
    for n in range(1, 6):
        vals = [monomial_norm_sq((n,), SpaceParams.of((ell,))) for ell in range(4)]
        assert all(x > y for x, y in zip(vals, vals[1:]))


def test_space_params_validation():
    with pytest.raises(WcoError):
        SpaceParams(2, (0,))
    with pytest.raises(WcoError):
        SpaceParams(1, (-1,))


def test_basis_order():
    sp1, sp2 = SpaceParams.of((0,)), SpaceParams.of((0, 0))
    assert basis_enumerate(2, sp1) == [(0,), (1,), (2,)]
    assert basis_enumerate((1, 1), sp2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(basis_enumerate((3, 4), sp2)) == 20


def test_kernel_eval_examples(rng):
    sp = SpaceParams.of((0,))
    assert kernel_eval([0.5], [0.5], sp) == pytest.approx(16 / 9)
    sp2 = SpaceParams.of((1, 2))
    u = 0.6 * np.array([0.3 + 0.4j, -0.5j])
    assert kernel_eval([0, 0], u, sp2) == 1
    z = 0.6 * np.array([0.1 - 0.7j, 0.9])
    assert abs(kernel_eval(z, u, sp2) - np.conj(kernel_eval(u, z, sp2))) < 1e-14
    diag = kernel_eval(z, z, sp2)
    assert abs(diag.imag) < 1e-15 and diag.real == pytest.approx(
        np.prod((1 - np.abs(z) ** 2) ** -np.array([3.0, 4.0]))
    )


def test_kernel_eval_outside_disk():
    with pytest.raises(DomainError):
        kernel_eval([1.0], [0.0], SpaceParams.of((0,)))
    with pytest.raises(DomainError):
        check_in_polydisk([0.2, 1.5j], 2)


def test_kernel_coeffs():
    sp = SpaceParams.of((0,))
    assert np.allclose(kernel_coeffs([0.0], 5, sp).coeffs, [1, 0, 0, 0, 0, 0])
    n = np.arange(11)
    assert np.allclose(kernel_coeffs([0.5], 10, sp).coeffs, (n + 1) * 0.5**n, atol=1e-15)
    sp2 = SpaceParams.of((0, 1))
    z, u = np.array([0.7, 0.7j]), np.array([-0.7j, 0.7])
    approx = eval(kernel_coeffs(z, 80, sp2), u)
    assert abs(approx - kernel_eval(z, u, sp2)) < 1e-15 * abs(kernel_eval(z, u, sp2)) + 80**3 * 0.49**81


def test_inner_product_basics():
    sp = SpaceParams.of((0,))
    assert inner_product(constant(1, 1, 4), constant(1, 1, 4), sp) == pytest.approx(1)
    z = monomial(1, (1,), 4)
    assert inner_product(z, z, sp) == pytest.approx(0.5)


@pytest.mark.parametrize("ell", [(0,), (2,), (0, 1), (2, 2)])
def test_reproducing_property(rng, ell):
    sp = SpaceParams.of(ell)
    caps = 6
    shape = (caps + 1,) * sp.d
    for _ in range(10):
        h = PowerSeries(rng.normal(size=shape) + 1j * rng.normal(size=shape))
        r = 0.7 * np.sqrt(rng.random(sp.d))
        z = r * np.exp(2j * np.pi * rng.random(sp.d))
        val = inner_product(h, kernel_coeffs(z, caps, sp), sp)
        assert abs(val - eval(h, z)) < 1e-12 * max(1, abs(eval(h, z)))


def test_kernel_norm_matches_diagonal():
    sp = SpaceParams.of((1,))
    z = [0.5j]
    k = kernel_coeffs(z, 120, sp)
    assert inner_product(k, k, sp).real == pytest.approx(kernel_eval(z, z, sp).real, rel=1e-12)


@pytest.mark.parametrize("ell", [(0,), (1,), (2,), (0, 2), (1, 1)])
def test_quadrature_matches_closed_form(ell):
    sp = SpaceParams.of(ell)
    grid = make_grid(sp, 32, 64)
    for alpha in basis_enumerate(8 if sp.d == 1 else 5, sp):
        m = monomial(sp.d, alpha, 8)
        q = quad_inner_product(m, m, sp, grid)
        assert abs(q - monomial_norm_sq(alpha, sp)) < 1e-10 * monomial_norm_sq(alpha, sp)


def test_quadrature_orthogonality():
    sp = SpaceParams.of((1, 0))
    grid = make_grid(sp)
    a, b = monomial(2, (2, 3), 6), monomial(2, (2, 4), 6)
    assert abs(quad_inner_product(a, b, sp, grid)) < 1e-12
    one = constant(1, 2, 3)
    assert quad_inner_product(one, one, sp, grid) == pytest.approx(1, abs=1e-13)


@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from([(0,), (2,), (0, 1), (2, 1)]))
@settings(max_examples=20, deadline=None)
def test_quadrature_agrees_with_inner_product(seed, ell):
    rng = np.random.default_rng(seed)
    sp = SpaceParams.of(ell)
    grid = make_grid(sp)
    shape = (9,) * sp.d if sp.d == 1 else (7, 7)
    h1 = PowerSeries(rng.normal(size=shape) + 1j * rng.normal(size=shape))
    h2 = PowerSeries(rng.normal(size=shape) + 1j * rng.normal(size=shape))
    exact = inner_product(h1, h2, sp)
    assert abs(quad_inner_product(h1, h2, sp, grid) - exact) < 1e-10 * max(1, abs(exact))


def test_quadrature_refuses_underresolved_grid():
    sp = SpaceParams.of((0,))
    grid = make_grid(sp, radial=2, angular=4)
    m = monomial(1, (8,), 8)
    with pytest.raises(UnderResolvedError):
        quad_inner_product(m, m, sp, grid)
