import math

import numpy as np
import pytest
from scipy.integrate import quad

from hypsob.errors import DomainError
from hypsob.geometry import (asymptotic_limits, ball_volume, inverse_volume, kernel_asymptotics_check,
                             kernel_brackets, omega, phi, sinh_kernel1, sphere_area, volume_closed_form)


def test_omega_known_values():
    assert omega(2) == pytest.approx(math.pi, rel=1e-15)
    assert omega(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)


def test_ball_volume_examples():
    assert ball_volume(0.0, 4) == 0.0
    assert ball_volume(1.0, 2) == pytest.approx(2 * math.pi * (math.cosh(1) - 1), rel=1e-13)
    assert ball_volume(1e-3, 3) == pytest.approx(omega(3) * 1e-9, rel=1e-5)


@pytest.mark.parametrize("n", [2, 3])
def test_ball_volume_closed_form(n):
    r = np.linspace(0.1, 15, 40)
    np.testing.assert_allclose(ball_volume(r, n), volume_closed_form(r, n), rtol=1e-12)


@pytest.mark.parametrize("n", [4, 5, 8])
def test_ball_volume_quadrature_oracle(n):
    for r in (0.05, 0.7, 3.0, 9.0):
        ref = sphere_area(n) * quad(lambda t: math.sinh(t) ** (n - 1), 0, r, epsabs=0, epsrel=1e-13)[0]
        assert ball_volume(r, n) == pytest.approx(ref, rel=1e-12)


def test_inverse_volume_examples():
    assert inverse_volume(0.0, 3) == 0.0
    assert inverse_volume(2 * math.pi * (math.cosh(2) - 1), 2) == pytest.approx(2.0, abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_inverse_roundtrip(n):
    v = np.geomspace(1e-12, 1e12, 49)
    np.testing.assert_allclose(ball_volume(inverse_volume(v, n), n), v, rtol=1e-11)


def test_domain_errors():
    with pytest.raises(DomainError):
        ball_volume(-1.0, 3)
    with pytest.raises(DomainError):
        inverse_volume(-1.0, 3)
    with pytest.raises(DomainError):
        ball_volume(1.0, 1)
    with pytest.raises(DomainError):
        phi(3, 1.0, 3)


def test_phi_examples():
    for a in (0, 0.5, 1.7):
        assert phi(a, 1.0, 3) == 1.0
    assert phi(2, 1 / 16, 4) == pytest.approx(4.0)
    assert phi(0, math.e, 3) == pytest.approx(1 / math.e)


def test_kernel_asymptotics():
    s, l = kernel_asymptotics_check(2, t_small=1e-6)
    assert s == pytest.approx(math.sqrt(math.pi), rel=0.01)
    s, l = kernel_asymptotics_check(3, t_large=1e6)
    assert l == pytest.approx(2 * math.pi, rel=0.01)
    assert asymptotic_limits(3)[1] == pytest.approx(2 * math.pi)


def test_kernel_brackets_are_two_sided():
    (a, b), (c, d) = kernel_brackets(4)
    assert 0 < a <= b < math.inf and 0 < c <= d < math.inf


def test_sinh_kernel_decreasing():
    t = np.geomspace(1e-6, 1e6, 100)
    assert np.all(np.diff(sinh_kernel1(t, 3)) < 0)
