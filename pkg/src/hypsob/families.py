"""Seeded test families used by the certification and verification suites."""
import math

import numpy as np

from .errors import DomainError
from .piecewise import Piecewise
from .rearrangement import StepFunction

WITNESS_SIZES = tuple(10.0 ** j for j in range(-3, 4))


def random_steps(count, seed, lo=1e-4, hi=1e4, max_pieces=8):
    """Random nonincreasing step functions with log-uniform breakpoints."""
    if count < 0:
        raise DomainError("count must be nonnegative")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_pieces + 1))
        b = np.sort(np.exp(rng.uniform(math.log(lo), math.log(hi), size=k)))
        b = np.unique(b)
        v = np.sort(rng.uniform(0.05, 1.0, size=b.size))[::-1] * float(np.exp(rng.normal(0.0, 1.0)))
        out.append(StepFunction(b, v))
    return out


def random_step_pairs(count, seed, monotone=False):
    """Pairs of (not necessarily monotone) random step functions."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        pair = []
        for _ in range(2):
            k = int(rng.integers(1, 7))
            b = np.unique(np.sort(np.exp(rng.uniform(math.log(1e-3), math.log(1e3), size=k))))
            v = rng.uniform(0.0, 2.0, size=b.size)
            if monotone:
                v = np.sort(v)[::-1]
            pair.append(StepFunction(b, v))
        out.append(tuple(pair))
    return out


def indicator_witnesses(sizes=WITNESS_SIZES):
    return [StepFunction.indicator(a) for a in sizes]


def critical_witnesses(p, delta=0.1):
    """Nonincreasing power functions just inside L^p near 0 and near infinity.

    Returns t^(-1/p+delta) on (0,1] and t^(-1/p-delta) on (1,inf); for
    p = inf only indicators are meaningful and the list is empty.
    """
    if p == math.inf:
        return []
    g = 1.0 / p
    out = [Piecewise.monomial(-(g - delta), 1.0, hi=1.0)]
    if g + delta <= 1.5:
        out.append(Piecewise.monomial(-(g + delta), 1.0, lo=1.0) + Piecewise.monomial(0, 1.0, hi=1.0))
    return out


def suite_family(count, seed, p=None):
    """Random steps, indicator witnesses and (optionally) critical power witnesses."""
    fam = random_steps(count, seed) + indicator_witnesses()
    if p is not None:
        fam += critical_witnesses(p)
    return fam


def powerlog_step(gamma, A=(0.0, 0.0), lo=1e-6, hi=1e6, per_decade=8):
    """Nonincreasing step approximation of t^(-gamma) l(t)^(-A) on (lo, hi), constant on (0, lo]."""
    edges = np.geomspace(lo, hi, int(round(per_decade * math.log10(hi / lo))) + 1)
    t = edges
    a = np.where(t < 1, A[0], A[1])
    vals = t ** (-gamma) * (1.0 + np.abs(np.log(t))) ** (-a)
    vals = np.minimum.accumulate(vals / vals.max())
    return StepFunction(edges, vals)


def lz_witnesses(p, A=(0.0, 0.0), spans=((1e-2, 1e2), (1e-4, 1e4), (1e-6, 1e6), (1e-6, 1.0), (1.0, 1e6))):
    """Truncated power-log witnesses at the critical exponent of L^{p,q;A}."""
    gamma = 1.0 / p if p < math.inf else 0.0
    return [powerlog_step(gamma, A, lo, hi) for lo, hi in spans]
