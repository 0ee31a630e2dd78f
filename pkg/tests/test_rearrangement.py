import math

import numpy as np
import pytest

from hypsob.errors import DomainError
from hypsob.families import random_step_pairs, random_steps
from hypsob.rearrangement import (GridFunction, StepFunction, dilate, distribution, function_from_dict,
                                  function_to_dict, max_rearrange, rearrange, star_value, subadditivity_gap)


def two_step():
    return StepFunction([1.0, 4.0], [3.0, 1.0])


def test_distribution_examples():
    assert distribution(StepFunction.indicator(2.5), 0.5) == 2.5
    assert distribution(two_step(), 2.0) == 1.0
    assert distribution(two_step(), 5.0) == 0.0
    with pytest.raises(DomainError):
        distribution(two_step(), 0.0)


def test_rearrange_examples():
    # chi_E with E = (0,1] u (2,4], |E| = 3
    chi = StepFunction([1.0, 2.0, 4.0], [1.0, 0.0, 1.0])
    assert rearrange(chi) == StepFunction.indicator(3.0)
    assert rearrange(StepFunction([1.0, 2.0], [1.0, 3.0])) == StepFunction([1.0, 2.0], [3.0, 1.0])
    f = two_step()
    assert rearrange(f) == f


def test_max_rearrange_examples():
    f = two_step()
    assert max_rearrange(f, 2.0) == pytest.approx(2.0)
    assert max_rearrange(StepFunction.indicator(10.0) * 3.0, np.array([1.0, 5.0])) == pytest.approx([3.0, 3.0])
    with pytest.raises(DomainError):
        max_rearrange(f, 0.0)


def test_max_rearrange_dominates_star():
    for f in random_steps(30, seed=1):
        t = np.geomspace(1e-5, 1e5, 50)
        assert np.all(max_rearrange(f, t) >= star_value(f, t) - 1e-12)


def test_dilation_examples():
    f = two_step()
    assert dilate(f, 1.0) == f
    assert dilate(StepFunction.indicator(1.0), 2.0) == StepFunction.indicator(2.0)
    np.testing.assert_allclose(dilate(f, 1 / 3).breakpoints, f.breakpoints / 3)
    with pytest.raises(DomainError):
        dilate(f, 0.0)


def test_subadditivity_examples():
    chi = StepFunction.indicator(1.0)
    lhs, a, b = subadditivity_gap(chi, chi, 2.0)
    assert (lhs, a, b) == pytest.approx((2.0, 1.0, 1.0))
    f, g = StepFunction.indicator(0.0 + 1.0), StepFunction.indicator(1.0, 2.0)
    lhs, a, b = subadditivity_gap(f, g, 3.0)
    assert lhs == pytest.approx(a + b)


def test_subadditivity_random():
    for f, g in random_step_pairs(100, seed=7):
        for t in (0.01, 1.0, 30.0):
            lhs, a, b = subadditivity_gap(f, g, t)
            assert lhs <= (a + b) * (1 + 1e-12)


def test_hardy_littlewood():
    # int f g <= int f* g*
    for f, g in random_step_pairs(50, seed=9):
        pts = np.union1d(f.breakpoints, g.breakpoints)
        lhs = StepFunction(pts, f(pts) * g(pts)).integral()
        fs, gs = rearrange(f), rearrange(g)
        pts = np.union1d(fs.breakpoints, gs.breakpoints)
        rhs = StepFunction(pts, fs(pts) * gs(pts)).integral()
        assert lhs <= rhs * (1 + 1e-12)


def test_step_normalization_and_json():
    f = StepFunction([1.0, 2.0, 3.0], [2.0, 2.0, 0.0])
    assert f == StepFunction.indicator(2.0) * 2.0
    assert function_from_dict(function_to_dict(f)) == f
    with pytest.raises(DomainError):
        StepFunction([2.0, 1.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        StepFunction([1.0], [-1.0])


def test_grid_function_rearrangement():
    t = np.geomspace(1e-4, 1e2, 400)
    gf = GridFunction(t, np.exp(-t))
    star = rearrange(gf)
    assert np.all(np.diff(star.samples) <= 1e-15)
    assert distribution(gf, 0.5) == pytest.approx(math.log(2), rel=0.02)
