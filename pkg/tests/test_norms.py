import math

import numpy as np
import pytest
from scipy.integrate import quad

from hypsob.errors import SpecError
from hypsob.families import random_step_pairs, random_steps
from hypsob.norms import (INF, Associate, ClassicalLorentz, Intersection, Lebesgue, Lorentz, LorentzZygmund,
                          Named, Sum, Weight, associate_norm_lower_bound, associate_space, boyd_cross_check,
                          conjugate, holder_gap, lz_is_norm, maximal_bounded, norm, norm_value,
                          powerlog_membership, space_from_dict, space_to_dict)
from hypsob.rearrangement import PowerLogFunction, StepFunction, max_rearrange


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 7.0, INF])
def test_indicator_unit_norm(p):
    assert norm_value(Lebesgue(p), StepFunction.indicator(1.0)) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("p,q", [(2.0, 1.0), (2.0, 3.0), (4.0, 2.0), (1.5, 1.5)])
def test_lorentz_indicator(p, q):
    a = 3.7
    got = norm_value(LorentzZygmund(p, q, form="raw"), StepFunction.indicator(a))
    assert got == pytest.approx(a ** (1 / p) * (p / q) ** (1 / q), rel=1e-12)


def test_lebesgue_step_exact():
    f = StepFunction([1.0, 3.0], [2.0, 1.0])
    v = norm(Lebesgue(2.0), f)
    assert v.certified == "exact"
    assert v.value == pytest.approx(math.sqrt(4 + 2))
    assert norm_value(Lebesgue(INF), f) == 2.0


def test_lz_log_weight_by_quadrature():
    # ||chi_(0,1/2)||_{L^{2,2;[1,0]}} = (int_0^1/2 (1 + |log t|)^2 dt)^(1/2)
    chi = StepFunction.indicator(0.5)
    got = norm_value(LorentzZygmund(2.0, 2.0, (1.0, 0.0), form="raw"), chi)
    ref = math.sqrt(quad(lambda t: (1 - math.log(t)) ** 2, 0, 0.5, epsrel=1e-13)[0])
    assert got == pytest.approx(ref, rel=1e-9)
    # the default functional uses f** = min(1, 1/(2t))
    got = norm_value(LorentzZygmund(2.0, 2.0, (1.0, 0.0)), chi)
    ref = quad(lambda t: (1 - math.log(t)) ** 2, 0, 0.5, epsrel=1e-13)[0]
    ref += quad(lambda t: ((1 - math.log(t)) / (2 * t)) ** 2, 0.5, 1.0, epsrel=1e-13)[0]
    ref += quad(lambda t: (1 / (2 * t)) ** 2, 1.0, np.inf, epsrel=1e-13)[0]
    assert got == pytest.approx(math.sqrt(ref), rel=1e-9)


def test_z3_formula():
    m, n, ai = 3, 5, 3.0
    f = StepFunction([0.5, 4.0, 40.0], [3.0, 1.0, 0.2])
    t = np.union1d(np.geomspace(1.0, 1e6, 20001), f.breakpoints)
    ref = 3.0 + np.max((1 + np.log(t)) ** (ai - 2) * max_rearrange(f, t))
    assert norm_value(Named("Z3", m, n, ai), f) == pytest.approx(ref, rel=1e-6)


def test_divergent_norm_is_infinite():
    g = PowerLogFunction(0.5)
    v = norm(Lebesgue(2.0), g)
    assert v.value == INF and v.certificate


def test_lz_is_norm_examples():
    assert lz_is_norm(1, 1, (0, 0))
    assert not lz_is_norm(INF, INF, (0.5, 2))
    assert lz_is_norm(INF, 2, (-1, 0))
    assert not lz_is_norm(INF, 2, (-0.5, 0))
    assert not lz_is_norm(1, 2, (0, 0))


def test_associate_examples():
    assert associate_space(LorentzZygmund(2, 2)) == LorentzZygmund(2, 2)
    assert associate_space(LorentzZygmund(1, 1, (1, -1))) == LorentzZygmund(INF, INF, (-1, 1))
    n, m, q = 5, 2, 3.0
    Xa = associate_space(LorentzZygmund(n / m, q, (0.5, -0.5)))
    assert (Xa.p, Xa.q, Xa.A) == (pytest.approx(5 / 3), 1.5, (-0.5, 0.5))
    with pytest.raises(SpecError):
        associate_space(LorentzZygmund(1, 2, (0, 0)))
    assert associate_space(Intersection((Lebesgue(2), Lebesgue(INF)))) == Sum((Lebesgue(2), Lebesgue(1.0)))


def test_conjugate():
    assert conjugate(1) == INF and conjugate(INF) == 1.0
    for p in (1.25, 4 / 3, 2.0, 3.0, 4.0):
        assert conjugate(conjugate(p)) == p


def test_associate_lower_bound_examples():
    chi = StepFunction.indicator(1.0)
    v = associate_norm_lower_bound(Lebesgue(2.0), chi, [chi])
    assert v.certified == "lower-bound" and v.value == pytest.approx(1.0)
    assert associate_norm_lower_bound(Lebesgue(2.0), StepFunction.zero(), [chi]).value == 0.0
    f = StepFunction([1.0, 2.0], [3.0, 1.0])
    fam = [StepFunction.indicator(a) for a in np.geomspace(1e-6, 1.0, 13)]
    assert associate_norm_lower_bound(Lebesgue(1.0), f, fam).value == pytest.approx(3.0)


def test_holder():
    chi = StepFunction.indicator(1.0)
    lhs, rhs = holder_gap(chi, chi, Lebesgue(2.0))
    assert lhs == pytest.approx(rhs)
    assert holder_gap(StepFunction.zero(), chi, Lebesgue(2.0))[0] == 0.0
    for f, g in random_step_pairs(100, seed=5):
        lhs, rhs = holder_gap(f, g, Lorentz(3.0, 2.0))
        assert lhs <= rhs * (1 + 1e-10)


def test_powerlog_membership_examples():
    k = 2
    g = PowerLogFunction(1.0, 0.0, float(k))
    for p in (1.0, 2.0, 10.0):
        assert powerlog_membership(g, Lebesgue(conjugate(p)), "upper")
    assert not powerlog_membership(g, Lebesgue(1.0), "upper")
    assert powerlog_membership(PowerLogFunction(0.0), Lebesgue(INF), "upper")
    # t^(-1+m/n) on (0,1) in L^r iff r (1 - m/n) < 1
    n, m = 5, 2
    for r in (1.2, 1.6, 1.7, 2.0, 4.0):
        expected = r * (1 - m / n) < 1
        assert powerlog_membership(PowerLogFunction(1 - m / n), Lebesgue(r), "lower") == expected


def test_maximal_bounded_and_boyd():
    assert maximal_bounded(Lebesgue(2.0), "X") and maximal_bounded(Lebesgue(2.0), "X'")
    assert not maximal_bounded(Lebesgue(1.0), "X")
    assert not maximal_bounded(Lebesgue(INF), "X'")
    for X in (Lebesgue(2.0), Lebesgue(1.0), LorentzZygmund(3.0, 1.0, (0.5, 0.0))):
        assert boyd_cross_check(X, "X")["agree"]


def test_classical_lorentz_matches_lz():
    f = StepFunction([0.3, 2.0, 9.0], [2.0, 1.0, 0.5])
    a = norm_value(ClassicalLorentz(2.0, Weight.power_log(1 / 3 - 1 / 2, (0.5, -0.5))), f)
    b = norm_value(LorentzZygmund(3.0, 2.0, (0.5, -0.5), form="raw"), f)
    assert a == pytest.approx(b, rel=1e-10)


def test_intersection_and_sum():
    f = StepFunction([0.5, 3.0], [2.0, 1.0])
    X, Y = Lebesgue(1.0), Lebesgue(INF)
    assert norm_value(Intersection((X, Y)), f) == max(norm_value(X, f), norm_value(Y, f))
    s = norm_value(Sum((X, Y)), f)
    assert s <= min(norm_value(X, f), norm_value(Y, f)) + 1e-12
    # K-functional at the break: ||f* chi_(0,1/2)||_1 + ||f* chi_(1/2,inf)||_inf = 1 + 1
    assert s == pytest.approx(2.0, rel=1e-9) or s < 2.0


def test_space_json_roundtrip():
    spaces = [Lebesgue(2.0), Lorentz(3.0, 1.0), LorentzZygmund(INF, 2.0, (-1.0, 0.0)), Named("Z3", 3, 5, 3.0),
              Intersection((Lebesgue(INF), Lebesgue(2.0))), Associate(Lebesgue(2.0)),
              ClassicalLorentz(2.0, Weight.power_log(0.1, (0.5, 0.0)))]
    for X in spaces:
        assert space_from_dict(space_to_dict(X)) == X
    assert space_from_dict("L2") == Lebesgue(2.0)
    with pytest.raises(SpecError):
        space_from_dict({"space": "nope"})


def test_lorentz_legality():
    with pytest.raises(SpecError):
        Lorentz(1.0, 2.0)
    with pytest.raises(SpecError):
        norm(LorentzZygmund(INF, INF, (0.5, 0.0)), StepFunction.indicator(1.0))
