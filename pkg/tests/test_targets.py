import math

import numpy as np
import pytest

from hypsob import targets
from hypsob.errors import ApplicabilityError, SpecError
from hypsob.families import random_steps
from hypsob.norms import (INF, Associate, ClassicalLorentz, Intersection, Lebesgue, Lorentz, LorentzZygmund,
                          Named, OperatorInduced, norm_value)
from hypsob.rearrangement import StepFunction

CHI = StepFunction.indicator(1.0)


def test_existence_examples():
    for p in (1.0, 2.0, 50.0):
        assert targets.existence_condition(3, Lebesgue(p))[0]
    ok, witness = targets.existence_condition(3, Lebesgue(INF))
    assert not ok and witness["member"] is False
    for ai, expected in ((1.0, False), (2.0, False), (2.01, True), (3.0, True)):
        assert targets.existence_condition(3, LorentzZygmund(INF, INF, (0.0, ai)))[0] == expected


def test_m1_functionals_coincide():
    for g in random_steps(10, seed=1):
        vals = [targets.operator_functional(k, 1, Lebesgue(2.0), g, 4).value for k in ("nu", "sigma", "lambda")]
        assert vals[0] == pytest.approx(vals[1], rel=1e-12) == pytest.approx(vals[2], rel=1e-12)


def test_lambda_indicator_in_Linf():
    # X = L^1, X' = L^inf: sup_t R_m chi_(0,1) = 1
    assert targets.target_norm_lambda(1, Lebesgue(1.0), CHI, 3).value == pytest.approx(1.0)
    for m in (2, 3, 4):
        assert targets.operator_functional("lambda", m, Lebesgue(INF), CHI, 6).value == pytest.approx(1.0)


def test_sigma_infinite_when_log_condition_fails():
    v = targets.target_norm_sigma(3, Lebesgue(INF), CHI, 5)
    assert v.value == INF
    assert v.certificate["existence_condition"] is False


def test_applicability_errors():
    with pytest.raises(ApplicabilityError) as exc:
        targets.target_norm_sigma(3, Lebesgue(1.0), CHI, 5)
    assert exc.value.failed == ["f** bounded on X"]
    with pytest.raises(ApplicabilityError):
        targets.target_norm_mu(3, Lebesgue(INF), CHI, 5)
    with pytest.raises(ApplicabilityError):
        targets.target_norm_lambda(3, Lebesgue(1.0), CHI, 5)


def test_nu_equals_mu_for_m3():
    for g in random_steps(10, seed=2):
        a = targets.target_norm_nu(3, Lebesgue(1.5), g, 5).value
        b = targets.target_norm_mu(3, Lebesgue(1.5), g, 5).value
        assert a == pytest.approx(b, rel=1e-10)


def test_sub_and_supercritical_examples():
    n, m = 5, 2
    crit = n / m
    assert targets.subcritical_condition(m, Lebesgue(1.0), n)
    assert targets.subcritical_condition(m, Lorentz(crit, 1.0), n)
    assert targets.supercritical_condition(m, Lorentz(crit, 1.0), n)
    for p in (1.5, 2.0):
        assert targets.subcritical_condition(m, Lorentz(p, 2.0), n)
        assert not targets.supercritical_condition(m, Lorentz(p, 2.0), n)
    for p in (3.0, 10.0):
        assert not targets.subcritical_condition(m, Lorentz(p, 2.0), n)
        assert targets.supercritical_condition(m, Lorentz(p, 2.0), n)
    assert not targets.subcritical_condition(m, Lorentz(crit, 2.0), n)
    assert not targets.supercritical_condition(m, Lorentz(crit, 2.0), n)


@pytest.mark.parametrize("n,m", [(3, 1), (3, 2), (5, 3), (6, 4)])
def test_lz_table_rows(n, m):
    crit = n / m
    half = math.ceil(m / 2)
    d = targets.lz_optimal_target(m, 0.5 * (1 + crit), 2.0, (0.0, 0.0), n)
    assert d.row == "v1" and isinstance(d.result, ClassicalLorentz)
    d = targets.lz_optimal_target(m, 1.0, 1.0, (0.0, 0.0), n)
    assert d.row == {1: "v1", 2: "Z2", 3: "Z1", 4: "Z2"}[m]
    assert targets.lz_optimal_target(m, crit, 2.0, (0.0, 0.0), n).row == "v2"
    assert targets.lz_optimal_target(m, crit, 2.0, (0.5, 0.0), n).row == "v3"
    assert targets.lz_optimal_target(m, crit, 1.0, (0.0, 0.0), n).row == "Linf-cap-X"
    assert targets.lz_optimal_target(m, crit + 1.0, 2.0, (0.0, 0.0), n).row == "Linf-cap-X"
    d = targets.lz_optimal_target(m, INF, INF, (0.0, half + 0.5), n)
    assert d.row == "Z3" and d.result == Named("Z3", m, n, half + 0.5)
    d = targets.lz_optimal_target(m, INF, INF, (0.0, float(half)), n)
    assert d.result is None and not d.exists
    assert d.certificate["failed"] == "existence_condition"
    assert d.certificate["divergence"]["monotone"]


def test_lz_table_illegal():
    with pytest.raises(SpecError):
        targets.lz_optimal_target(2, INF, INF, (1.0, 3.0), 3)


def test_optimal_target_general():
    d = targets.optimal_target(1, Lebesgue(2.0), 3)
    assert d.kind == "sigma" and isinstance(d.result, Associate)
    d = targets.optimal_target(3, Lebesgue(1.0), 5)
    assert d.kind == "mu"
    assert d.result == Associate(OperatorInduced("mu", 3, 5, Lebesgue(INF)))
    assert not targets.optimal_target(3, Lebesgue(INF), 5).exists


def test_equivalence_trivial_cases():
    fam = random_steps(20, seed=3)
    r = targets.equivalence_certify("nu~sigma", 1, Lebesgue(2.0), fam, 3)
    assert r["min_ratio"] == pytest.approx(1.0) and r["max_ratio"] == pytest.approx(1.0)
    for pair in ("sigma~lambda", "nu~mu"):
        r = targets.equivalence_certify(pair, 2, Lebesgue(2.0), fam, 4)
        assert r["min_ratio"] == pytest.approx(1.0) and r["max_ratio"] == pytest.approx(1.0)
    r = targets.equivalence_certify("nu~sigma", 3, Lebesgue(2.0), random_steps(50, seed=4), 5)
    assert r["finite"] and 0 < r["min_ratio"] <= r["max_ratio"] < INF
    with pytest.raises(ApplicabilityError):
        targets.equivalence_certify("nu~sigma", 3, Lebesgue(INF), fam, 5)
    with pytest.raises(ApplicabilityError):
        targets.equivalence_certify("sigma~lambda", 3, Lebesgue(1.0), fam, 5)


def test_domination_constants():
    fam = random_steps(30, seed=5)
    assert 0 < targets.domination_constant("sigma", "nu", 3, Lebesgue(2.0), fam, 5) < INF
    assert 0 < targets.domination_constant("lambda", "sigma", 3, Lebesgue(2.0), fam, 5) < INF


def test_intersection_examples():
    fam = random_steps(30, seed=6) + [CHI]
    r = targets.intersection_decomposition_check("v1", fam, 5, 1, 2.0, 2.0)
    assert 0 < r["min_ratio"] <= r["max_ratio"] < INF
    r = targets.intersection_decomposition_check("v1", [StepFunction.zero()], 5, 1, 2.0, 2.0)
    assert r["empty"]
    for case, kw in (("Z1", {}), ("Z2", {}), ("Z3", {"A": (0.0, 3.0)}), ("v2", {"q": 2.0}),
                     ("v3", {"q": 2.0, "A": (0.5, 0.0)})):
        m = 4 if case == "Z2" else 3
        r = targets.intersection_decomposition_check(case, fam, 6, m, **kw)
        assert 0 < r["min_ratio"] <= r["max_ratio"] < INF


def test_table_and_general_constructions_agree():
    # X = L^2, m = 1, n = 3: the table gives Lambda^2_{v1}, sigma gives the associate of sigma_{1,X'}
    fam = random_steps(20, seed=7)
    d = targets.lz_optimal_target(1, 2.0, 2.0, (0.0, 0.0), 3)
    ratios = []
    for g in fam:
        tab = norm_value(d.result, g)
        gen = norm_value(targets.optimal_target(1, Lebesgue(2.0), 3).result, g)
        ratios.append(tab / gen)
    assert 0 < min(ratios) <= max(ratios) < INF


def test_nonexistence_certificate_Linf():
    c = targets.nonexistence_certificate(2, Lebesgue(INF), 4)
    assert c["monotone"] and c["rate"] == "1+log T"
    assert c["fitted_exponent"] == pytest.approx(1.0, rel=1e-6)
    # k = 0: the truncated value is log T plus a constant from (0, 1)
    v = c["values"]
    assert v[2] - v[1] == pytest.approx(math.log(100), rel=1e-6)


def test_increment_rate_exact():
    L = [1 + math.log(T) for T in (1e2, 1e4, 1e6)]
    assert targets.increment_rate([3 + 2 * x ** 1.7 for x in L], L) == pytest.approx(1.7, rel=1e-9)
    assert math.isnan(targets.increment_rate([1.0, 1.0, 1.0], L))
