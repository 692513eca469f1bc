import pytest

import numpy as np
from scipy.integrate import quad

from fracdrift.core import log_std_normal_pdf, std_normal_cdf


def test_std_normal_cdf():
    assert std_normal_cdf(0.) == 0.5
    assert std_normal_cdf(40.) == 1.

    density = lambda x: np.exp(-0.5 * x * x) / np.sqrt(2 * np.pi)
    v, _ = quad(density, -np.inf, 1., epsabs=1e-14, epsrel=1e-13)
    assert std_normal_cdf(1.) == pytest.approx(v, abs=1e-10)


def test_symmetry_and_monotonicity():
    x = np.linspace(-8, 8, 1601)
    p = std_normal_cdf(x)
    np.testing.assert_allclose(std_normal_cdf(-x), 1. - p, rtol=0, atol=1e-15)
    assert np.all(np.diff(p) >= 0)


def test_log_std_normal_pdf():
    assert log_std_normal_pdf(0.) == pytest.approx(-0.5 * np.log(2 * np.pi))
    # finite where the density underflows
    assert log_std_normal_pdf(-40.) == pytest.approx(
        -800. - 0.5 * np.log(2 * np.pi), rel=1e-15)
    np.testing.assert_array_equal(log_std_normal_pdf([-1., 1.]),
                                  [log_std_normal_pdf(1.)] * 2)
