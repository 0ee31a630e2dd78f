import math

import numpy as np
import pytest
from scipy.integrate import quad

from hypsob import verify
from hypsob.errors import DomainError, ResolutionError, RestrictedScopeError
from hypsob.geometry import ball_volume, inverse_volume, sphere_area
from hypsob.norms import INF, Lebesgue, LorentzZygmund, Named
from hypsob.rearrangement import StepFunction

N = 3


def kernel1(s, n=N):
    return math.sinh(float(inverse_volume(s, n))) ** (1 - n)


def test_profile_m1_against_quad():
    f = StepFunction.indicator(1.0, 2.0)
    prof = verify.build_profile(1, f, N)
    for t in (0.3, 1.0, 1.5, 1.9):
        ref = quad(kernel1, max(t, 1.0), 2.0, epsrel=1e-13)[0]
        assert prof(t) == pytest.approx(ref, rel=1e-11)
    assert np.all(prof(np.array([2.0, 3.0, 50.0])) == 0)


def test_profile_m2_against_nested_quad():
    f = StepFunction.indicator(1.0, 2.0)
    prof = verify.build_profile(2, f, N)
    k2 = lambda s: s * math.sinh(float(inverse_volume(s, N))) ** (2 - 2 * N)
    Pf = lambda s: max(0.0, min(s, 2.0) - 1.0) / s
    for t in (0.5, 1.5, 4.0):
        ref = quad(lambda s: Pf(s) * k2(s), max(t, 1.0), 2.0, epsrel=1e-12)[0] if t < 2 else 0.0
        ref += quad(lambda s: Pf(s) * k2(s), max(t, 2.0), np.inf, epsrel=1e-12, limit=200)[0]
        assert prof(t) == pytest.approx(ref, rel=1e-8)


def test_zero_profile():
    prof = verify.build_profile(3, StepFunction.zero(), 5)
    assert prof.zero and np.all(prof(np.array([0.1, 1.0])) == 0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_profile_ratio_bounds(m):
    lo, hi = verify.profile_ratio_bounds(m, StepFunction([0.5, 2.0], [2.0, 1.0]), 5)
    assert 0 < lo <= hi < INF


def test_admissibility():
    with pytest.raises(DomainError):
        verify.build_profile(1, StepFunction.indicator(1.0), 3)
    verify.build_profile(1, StepFunction.indicator(1.0), 3, allow_origin=True)


def test_laplacian_pointwise():
    f = verify.smooth_bump(1.0, 2.0)
    prof = verify.build_profile(2, f, N)
    r = verify.distance_grid(float(inverse_volume(1.05, N)), float(inverse_volume(1.95, N)), 61)
    target = verify.laplacian_target(f, N, r)
    inner = np.abs(target) > 0.05 * np.max(np.abs(target))
    for lap in (verify.radial_laplacian(prof, r), verify.laplacian_oracle(f, N, r)):
        err = np.abs(lap - target)[inner] / np.abs(target[inner])
        assert err.max() < 1e-4


def test_laplacian_vanishes_off_support():
    f = verify.smooth_bump(1.0, 2.0)
    prof = verify.build_profile(2, f, N)
    r = verify.distance_grid(float(inverse_volume(0.1, N)), float(inverse_volume(0.8, N)), 11)
    lap = verify.radial_laplacian(prof, r)
    assert np.max(np.abs(lap)) < 1e-5 * sphere_area(N) ** 2
    zero = verify.build_profile(2, StepFunction.zero(), N)
    assert np.all(verify.radial_laplacian(zero, r) == 0)


def test_resolution_error():
    prof = verify.build_profile(2, verify.smooth_bump(), N)
    with pytest.raises(ResolutionError):
        verify.radial_laplacian(prof, np.array([0.5, 0.9, 1 - 1e-8]))
    with pytest.raises(ResolutionError):
        verify.radial_laplacian(prof, np.array([0.5, 0.6]))


def test_shell_volume_and_pullback():
    assert verify.shell_volume(0.0, 1.0, 2) == pytest.approx(ball_volume(1.0, 2))
    f = StepFunction([1.0, 3.0, 4.0], [1.0, 2.0, 0.5])
    pb = verify.pullback_rearrangement(f, 4)
    np.testing.assert_allclose(pb.values, [2.0, 1.0, 0.5])
    np.testing.assert_allclose(pb.breakpoints, [2.0, 3.0, 4.0], rtol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_gradient_identity(m):
    f = StepFunction([1.0, 3.0], [2.0, 1.0])
    for X in (Lebesgue(1.0), Lebesgue(2.0), Lebesgue(INF), LorentzZygmund(3.0, 2.0)):
        lhs, rhs = verify.gradient_norm_identity(m, X, f, 5)
        assert lhs == pytest.approx(rhs, rel=1e-10)
    lhs, rhs = verify.gradient_norm_identity(m, Lebesgue(2.0), verify.smooth_bump(), 5)
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_polya_szego_rejects_nonmonotone():
    prof = verify.CallableProfile(lambda t: np.where((t > 1) & (t < 2), 1.0, 0.0) * (t - 1), N, (1.0, 2.0), 2.0)
    with pytest.raises(RestrictedScopeError) as exc:
        verify.polya_szego_radial_check(prof, Lebesgue(2.0))
    assert "lhs" in exc.value.details
    with pytest.raises(RestrictedScopeError):
        verify.polya_szego_radial_check(verify.build_profile(1, StepFunction.indicator(1.0, 2.0), N),
                                        LorentzZygmund(2.0, 1.0))


def test_potential_estimate():
    f = StepFunction([0.5, 2.0], [2.0, 1.0])
    t = np.array([0.1, 0.5, 1.0, 3.0])
    lhs, rhs = verify.potential_estimate_check(f, N, t)
    assert np.all(lhs <= rhs * (1 + 1e-9))


def test_reduction_ratio_conventions():
    assert verify.reduction_ratio(1, Lebesgue(2.0), Lebesgue(2.0), StepFunction.zero(), 3) == 0.0
    from hypsob.rearrangement import PowerLogFunction
    assert math.isnan(verify.reduction_ratio(1, Lebesgue(1.0), Lebesgue(1.0), PowerLogFunction(1.0), 3))


def test_reduction_suite_output():
    fam, ref = verify.family_pair(20, 0)
    res = verify.reduction_ratio_suite(3, Lebesgue(1.0), Named("Z1", 3, 5), fam, 5, "T", ref)
    d = res.to_dict()
    assert set(d) == {"case", "parameters", "family_size", "empirical_constant", "refinement_delta",
                      "witnesses", "pass"}
    assert d["pass"] and d["family_size"] == len(ref)
    assert fam[:20] == ref[:20]


def test_witness_growth_detects_wrong_target():
    # L^1 -> L^1 is not the optimal target for m = 1, n = 3; L^1 -> L^{3/2,inf} is
    w = verify.witness_growth(1, Lebesgue(1.0), LorentzZygmund(1.5, INF), 3)
    assert w["growth"] < 10
    w = verify.witness_growth(1, Lebesgue(1.0), LorentzZygmund(INF, INF), 3)
    assert w["increasing"] and w["growth"] > 10


def test_limiting_supercritical_needs_alpha():
    with pytest.raises(DomainError) as exc:
        verify.limiting_spaces("Linf-LZ", 5, 3, 2.0)
    assert exc.value.details["divergence"]["monotone"]
    X, Y = verify.limiting_spaces("Linf-LZ", 5, 3, 2.5)
    assert Y == Named("Z3", 3, 5, 2.5)
    with pytest.raises(DomainError):
        verify.limiting_spaces("m-odd-L1", 5, 2)
