import math

import numpy as np
import pytest

from hypsob import hardy
from hypsob.errors import DivergenceError, DomainError, SpecError
from hypsob.families import random_steps
from hypsob.hardy import OperatorSpec, compose, derived_k_beta
from hypsob.piecewise import Piecewise
from hypsob.rearrangement import StepFunction


@pytest.mark.parametrize("m,k,beta", [(1, 0, 1), (2, 0, 2), (3, 1, 1), (4, 1, 2), (5, 2, 1), (6, 2, 2)])
def test_k_beta(m, k, beta):
    assert derived_k_beta(m) == (k, beta)
    assert 2 * k + beta == m


def test_kernel_integral_examples():
    assert hardy.kernel_integral(2, 0.0, 1.0, 4) == pytest.approx(2.0)
    assert hardy.kernel_integral(1.3, 1.0, math.e, 5) == pytest.approx(1.0)
    assert hardy.kernel_integral(1, 1 / 8, 4.0, 3) == pytest.approx(1.5 + math.log(4))
    with pytest.raises(DomainError):
        hardy.kernel_integral(1, 2.0, 1.0, 3)
    with pytest.raises(DivergenceError):
        hardy.kernel_integral(0, 0.0, 1.0, 3)


def test_kernel_integral_vectorized():
    a = np.array([0.1, 1.0, 2.0])
    b = np.array([0.5, 3.0, 8.0])
    out = hardy.kernel_integral(2, a, b, 5)
    ref = [hardy.kernel_integral_quadrature(2, x, y, 5) for x, y in zip(a, b)]
    np.testing.assert_allclose(out, ref, rtol=1e-12)


def test_zero_inputs():
    z = StepFunction.zero()
    t = np.array([0.5, 2.0])
    for g in (hardy.apply_R(1, z, 3), hardy.apply_H(1, z, 3), hardy.apply_T(2, z, 3)):
        assert np.all(g(t) == 0)
    assert hardy.adjointness_gap(1, z, StepFunction.indicator(1.0), 3) == (0.0, 0.0)


def test_H0_indicator():
    g = hardy.apply_H(0, StepFunction.indicator(5.0), 3)
    t = np.array([0.1, 1.0, 3.0])
    np.testing.assert_allclose(g(t), np.log(5.0 / t), rtol=1e-13)


def test_R_indicator_peak():
    # R_1 chi_(0,1) = t phi_1(t) on (0,1), 1/t beyond: maximum 1 at t = 1
    g = hardy.apply_R(1, StepFunction.indicator(1.0), 3)
    t = np.geomspace(1e-3, 1e3, 301)
    assert g(t).max() == pytest.approx(1.0)


def test_S_support():
    s = hardy.apply_S(3, StepFunction.indicator(1.0), 5)
    assert s(np.array([math.e]))[0] == 0.0


def test_T_m_against_nested_quadrature():
    # T_1 f = H_1 f; T_2 f = H_2 P f: compare with scipy quadrature of the definitions
    from scipy.integrate import quad
    f = StepFunction([0.5, 2.0], [2.0, 1.0])
    n = 4
    phi = lambda a, s: min(s ** (-1 + a / n), 1 / s)
    Pf = lambda s: (min(s, 0.5) * 2.0 + max(0.0, min(s, 2.0) - 0.5)) / s
    for t in (0.1, 0.7, 1.5):
        h1 = quad(lambda s: f(s) * phi(1, s), t, 2.0, points=[0.5, 1.0], epsrel=1e-12)[0]
        assert hardy.apply_T(1, f, n)(np.array([t]))[0] == pytest.approx(h1, rel=1e-10)
        h2 = quad(lambda s: Pf(s) * phi(2, s), t, 1.0, epsrel=1e-12)[0] if t < 1 else 0.0
        h2 += quad(lambda s: Pf(s) * phi(2, s), max(t, 1.0), 2.0, epsrel=1e-12)[0]
        h2 += quad(lambda s: 2.5 / s * phi(2, s), 2.0, np.inf, epsrel=1e-12)[0]
        assert hardy.apply_T(2, f, n)(np.array([t]))[0] == pytest.approx(h2, rel=1e-9)


def test_iterated_j0_reduces():
    f = StepFunction([0.3, 2.0], [1.5, 0.5])
    t = np.geomspace(0.01, 10, 9)
    np.testing.assert_allclose(hardy.iterated_R(1, 2, 0, f, 5)(t), hardy.apply_R(1, f, 5)(t), rtol=1e-11)
    np.testing.assert_allclose(hardy.iterated_H(2, 0, 1, f, 5)(t), hardy.apply_H(1, f, 5)(t), rtol=1e-11)


def test_HP_fubini_oracle():
    f = StepFunction([0.5, 3.0], [2.0, 1.0])
    t = np.geomspace(0.05, 5, 7)
    np.testing.assert_allclose(hardy.HP_fubini(2, f, 4)(t), hardy.HP_power(2, 1, f, 4)(t), rtol=1e-10)


def test_sandwich_j0():
    n, alpha = 4, 2
    t = np.geomspace(1e-3, 1e3, 61)
    for f in random_steps(10, seed=3):
        f = f.to_piecewise()
        mid = hardy.HP_power(alpha, 1, f, n)(t)
        lo = hardy.apply_R(alpha, f, n)(t) + hardy.apply_H(alpha, f, n)(t)
        assert np.all(lo <= mid * (1 + 1e-12))
        assert np.all(mid <= n / (n - alpha) * lo * (1 + 1e-12))
    rep = hardy.sandwich_check(alpha, 0, StepFunction.zero(), n, t)
    assert rep.lower_constant == rep.upper_constant == 0.0


def test_sandwich_constants_finite():
    t = np.geomspace(1e-3, 1e3, 41)
    for f in random_steps(5, seed=11, max_pieces=5):
        rep = hardy.sandwich_check(2, 1, f, 4, t)
        assert rep.finite


def test_operator_spec_roundtrip():
    spec = OperatorSpec("Compose", 5, ops=(OperatorSpec("H", 5, alpha=2), OperatorSpec("P", 5)))
    assert OperatorSpec.from_dict(spec.to_dict()) == spec
    f = StepFunction.indicator(1.0)
    t = np.array([0.5, 2.0])
    np.testing.assert_allclose(compose(spec, f)(t), hardy.HP_power(2, 1, f, 5)(t))
    with pytest.raises(SpecError):
        OperatorSpec("X", 3)
    with pytest.raises(DomainError):
        OperatorSpec("T", 3, m=3)


def test_piecewise_exactness():
    g = Piecewise.from_step([1.0, 2.0], [2.0, 1.0])
    assert g.integral() == pytest.approx(3.0)
    assert g.cumulative()(np.array([1.5]))[0] == pytest.approx(2.5)
