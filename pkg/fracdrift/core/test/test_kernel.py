import pytest

import numpy as np
from scipy.integrate import quad

from fracdrift.core import (
    TimeGrid, frac_derivative, kernel_k, kernel_mass, kernel_mass_matrix,
    make_hurst_model, weight_w
)
from fracdrift.exceptions import DimensionError, DomainError, GridError


def test_kernel_k():
    model = make_hurst_model(0.5)
    np.testing.assert_allclose(kernel_k(model, 2., [0.1, 1., 1.9]), 1.,
                               rtol=1e-15)

    model = make_hurst_model(0.2)
    assert kernel_k(model, 1., 0.5) == pytest.approx(
        0.5 ** 0.3 * 0.5 ** 0.3 / model.kappa, rel=1e-14)

    model = make_hurst_model(0.8)
    assert kernel_k(model, 2., 1.) == pytest.approx(1. / model.kappa,
                                                     rel=1e-14)

    for s in (0., 2., -1., 3.):
        with pytest.raises(DomainError):
            kernel_k(model, 2., s)


@pytest.mark.parametrize("H", [0.2, 0.35, 0.5, 0.65, 0.8])
def test_kernel_mass_full_interval(H):
    model = make_hurst_model(H)
    t = 1.7
    p = model.exponent
    # quad with algebraic endpoint weight integrates the singular kernel
    ref, _ = quad(lambda s: 1. / model.kappa, 0., t, weight='alg',
                  wvar=(p, p), epsabs=0., epsrel=1e-13)
    assert kernel_mass(model, t, 0., t) == pytest.approx(ref, rel=1e-8)

    # the kernel integrates to the bracket
    assert kernel_mass(model, t, 0., t) == pytest.approx(
        weight_w(model, t), rel=1e-12)


def test_kernel_mass_intervals():
    model = make_hurst_model(0.5)
    assert kernel_mass(model, 3., 0.5, 2.) == pytest.approx(1.5, rel=1e-14)

    model = make_hurst_model(0.8)
    assert kernel_mass(model, 3., 1.2, 1.2) == 0.

    ref, _ = quad(lambda s: kernel_k(model, 3., s), 0.4, 2.2,
                  epsabs=0., epsrel=1e-13)
    assert kernel_mass(model, 3., 0.4, 2.2) == pytest.approx(ref, rel=1e-10)

    # vectorized
    ret = kernel_mass(model, 3., [0., 1.], [1., 3.])
    assert ret.shape == (2,)

    with pytest.raises(DomainError):
        kernel_mass(model, 3., 2., 1.)
    with pytest.raises(DomainError):
        kernel_mass(model, 3., -0.1, 1.)
    with pytest.raises(DomainError):
        kernel_mass(model, 3., 1., 3.5)
    with pytest.raises(DomainError):
        kernel_mass(model, 0., 0., 0.)


@pytest.mark.parametrize("H", [0.2, 0.8])
def test_kernel_mass_additive(H):
    model = make_hurst_model(H)
    rng = np.random.default_rng(7)
    t = 2.
    for _ in range(20):
        a, b, c = np.sort(rng.uniform(0, t, 3))
        whole = kernel_mass(model, t, a, c)
        parts = kernel_mass(model, t, a, b) + kernel_mass(model, t, b, c)
        assert parts == pytest.approx(whole, rel=1e-12, abs=1e-15)


def test_kernel_mass_matrix():
    model = make_hurst_model(0.3)
    grid = TimeGrid([0., 0.2, 0.5, 1.])
    w = kernel_mass_matrix(model, grid)
    assert w.shape == (4, 3)
    np.testing.assert_array_equal(w[0], 0.)
    assert w[1, 1] == 0. and w[1, 2] == 0. and w[2, 2] == 0.
    assert w[2, 1] == pytest.approx(kernel_mass(model, 0.5, 0.2, 0.5),
                                    rel=1e-14)
    # rows sum to the bracket
    np.testing.assert_allclose(w.sum(axis=1), weight_w(model, grid.points),
                               rtol=1e-12)


def test_weight_w():
    model = make_hurst_model(0.5)
    assert weight_w(model, 3.) == pytest.approx(3., rel=1e-15)

    for H in (0.2, 0.8):
        model = make_hurst_model(H)
        assert weight_w(model, 1.) == pytest.approx(1. / model.lambda_,
                                                    rel=1e-15)
        assert weight_w(model, 0.) == 0.
        t = np.linspace(0, 3, 31)
        assert np.all(np.diff(weight_w(model, t)) > 0)

    model = make_hurst_model(0.2)
    assert weight_w(model, 2.) == pytest.approx(2. ** 1.6 / model.lambda_,
                                                rel=1e-14)

    with pytest.raises(DomainError):
        weight_w(model, -1.)


@pytest.mark.parametrize("H", [0.2, 0.5, 0.8])
def test_frac_derivative_of_bracket(H):
    model = make_hurst_model(H)
    grid = TimeGrid.uniform(1., 512)
    ret = frac_derivative(model, grid, weight_w(model, grid.points))
    mask = grid.points >= 0.1
    np.testing.assert_allclose(ret[mask], 1., rtol=1e-3)


def test_frac_derivative_brownian():
    model = make_hurst_model(0.5)
    grid = TimeGrid.uniform(2., 200)
    t = grid.points
    # second-order differences are exact on quadratics
    np.testing.assert_allclose(frac_derivative(model, grid, t ** 2), 2 * t,
                               rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("H", [0.2, 0.8])
def test_frac_derivative_power(H):
    model = make_hurst_model(H)
    grid = TimeGrid.uniform(1., 1024)
    t = grid.points
    m = 3
    expected = model.lambda_ / (2 - 2 * H) * m * t[1:] ** (m - 2 + 2 * H)
    ret = frac_derivative(model, grid, t ** m)
    mask = t[1:] >= 0.1
    np.testing.assert_allclose(ret[1:][mask], expected[mask], rtol=1e-4)


def test_frac_derivative_edges():
    model = make_hurst_model(0.3)
    with pytest.raises(GridError):
        frac_derivative(model, TimeGrid([0.]), [0.])
    with pytest.raises(DimensionError):
        frac_derivative(model, TimeGrid.uniform(1., 4), np.zeros(3))

    # value at 0 is the linear extrapolation of the first interior values
    grid = TimeGrid.uniform(1., 10)
    ret = frac_derivative(model, grid, grid.points ** 2)
    assert ret[0] == pytest.approx(2 * ret[1] - ret[2], rel=1e-12)

    grid = TimeGrid([0., 1.])
    ret = frac_derivative(model, grid, [0., 2.])
    assert ret[0] == ret[1]
