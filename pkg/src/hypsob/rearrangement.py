"""Function representations on (0, inf) and their rearrangements.

``StepFunction`` is the exact test family, ``GridFunction`` a log-spaced
sampled function with an explicit tail model, and ``PowerLogFunction`` the
closed-form family t^(-gamma) l(t)^delta ll(t)^eps used for membership
questions.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DivergenceError, DomainError, SpecError
from .piecewise import Piecewise

INF = math.inf


def ell(t):
    """l(t) = 1 + |log t|."""
    return 1.0 + np.abs(np.log(t))


def ell2(t):
    """ll(t) = l(l(t))."""
    return 1.0 + np.log(ell(t))


class StepFunction:
    """Nonnegative simple function: values[i] on (breakpoints[i-1], breakpoints[i]].

    The first interval starts at 0 and the function vanishes beyond the last
    breakpoint.  Adjacent equal values are merged and trailing zeros dropped,
    so equal functions have equal representations.
    """

    __slots__ = ("breakpoints", "values")

    def __init__(self, breakpoints, values):
        b = np.asarray(breakpoints, dtype=float).ravel()
        v = np.asarray(values, dtype=float).ravel()
        if b.shape != v.shape:
            raise DomainError("breakpoints and values must have equal length")
        if b.size and (b[0] <= 0 or np.any(np.diff(b) <= 0) or not np.all(np.isfinite(b))):
            raise DomainError("breakpoints must be finite, positive and strictly increasing")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise DomainError("values must be finite and nonnegative")
        keep = np.ones(b.size, dtype=bool)
        keep[:-1] = v[:-1] != v[1:]
        b, v = b[keep], v[keep]
        nz = np.nonzero(v)[0]
        end = nz[-1] + 1 if nz.size else 0
        self.breakpoints = b[:end]
        self.values = v[:end]

    @classmethod
    def indicator(cls, a, b=None):
        """chi_(0,a), or chi_(a,b) when b is given."""
        if b is None:
            return cls([a], [1.0])
        if not 0 <= a < b:
            raise DomainError("need 0 <= a < b")
        return cls([a, b], [0.0, 1.0]) if a > 0 else cls([b], [1.0])

    @classmethod
    def zero(cls):
        return cls([], [])

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t_arr, side="left")
        vals = np.append(self.values, 0.0)
        out = np.where(t_arr > 0, vals[idx], 0.0)
        return float(out) if np.ndim(t) == 0 else out

    @property
    def lengths(self):
        return np.diff(np.concatenate([[0.0], self.breakpoints]))

    @property
    def support_end(self):
        return float(self.breakpoints[-1]) if self.breakpoints.size else 0.0

    def is_zero(self):
        return self.values.size == 0

    def is_nonincreasing(self):
        return bool(np.all(np.diff(self.values) <= 0))

    def sup(self):
        return float(self.values.max()) if self.values.size else 0.0

    def integral(self):
        return float(np.dot(self.lengths, self.values))

    def to_piecewise(self):
        return Piecewise.from_step(self.breakpoints, self.values)

    def __mul__(self, c):
        c = float(c)
        if c < 0:
            raise DomainError("step functions are nonnegative")
        return StepFunction(self.breakpoints, self.values * c)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        pts = np.union1d(self.breakpoints, other.breakpoints)
        return StepFunction(pts, self(pts) + other(pts))

    def __eq__(self, other):
        return (isinstance(other, StepFunction)
                and np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.breakpoints.tobytes(), self.values.tobytes()))

    def __repr__(self):
        return f"StepFunction(breakpoints={self.breakpoints.tolist()}, values={self.values.tolist()})"

    def to_dict(self):
        return {"type": "step", "breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}


@dataclass(frozen=True)
class PowerLogFunction:
    """t^(-gamma) l(t)^delta ll(t)^eps with separate exponents on (0,1) and [1,inf)."""

    gamma: float = 0.0
    delta0: float = 0.0
    delta_inf: float = 0.0
    eps0: float = 0.0
    eps_inf: float = 0.0

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr <= 0):
            raise DomainError("power-log functions are evaluated at t > 0")
        small = t_arr < 1
        d = np.where(small, self.delta0, self.delta_inf)
        e = np.where(small, self.eps0, self.eps_inf)
        out = t_arr ** (-self.gamma) * ell(t_arr) ** d * ell2(t_arr) ** e
        return float(out) if np.ndim(t) == 0 else out

    def exponents(self, at):
        """(power, log, loglog) exponents of the growth near 0 or infinity."""
        if at == 0:
            return -self.gamma, self.delta0, self.eps0
        return -self.gamma, self.delta_inf, self.eps_inf

    def to_dict(self):
        return {"type": "powerlog", "gamma": self.gamma, "delta": [self.delta0, self.delta_inf],
                "epsilon": [self.eps0, self.eps_inf]}


def default_grid(t_min=1e-8, t_max=1e8, size=2048):
    return np.geomspace(t_min, t_max, size)


@dataclass
class GridFunction:
    """Samples on an increasing geometric grid plus a tail model beyond t_max.

    The function is taken constant on the geometric cells around each node
    (and equal to the first sample on (0, t_min]).  ``tail`` is one of
    ``{"kind": "zero"}``, ``{"kind": "powerlog", "gamma": g, "delta": d, "epsilon": e}``
    (scaled to match the last sample) or ``{"kind": "unknown"}``.
    """

    t: np.ndarray
    samples: np.ndarray
    tail: dict = field(default_factory=lambda: {"kind": "zero"})

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.t.ndim != 1 or self.t.shape != self.samples.shape or self.t.size < 2:
            raise DomainError("grid and samples must be 1-d arrays of equal length >= 2")
        if self.t[0] <= 0 or np.any(np.diff(self.t) <= 0):
            raise DomainError("grid must be positive and strictly increasing")
        if not np.all(np.isfinite(self.samples)) or np.any(self.samples < 0):
            raise DomainError("samples must be finite and nonnegative")
        kind = self.tail.get("kind")
        if kind not in ("zero", "powerlog", "unknown"):
            raise SpecError(f"unknown tail kind {kind!r}")

    @classmethod
    def from_callable(cls, f, grid=None, tail=None):
        t = default_grid() if grid is None else np.asarray(grid, dtype=float)
        return cls(t, np.asarray(f(t), dtype=float), tail or {"kind": "zero"})

    @property
    def t_max(self):
        return float(self.t[-1])

    def cell_edges(self):
        mids = np.sqrt(self.t[:-1] * self.t[1:])
        last = self.t[-1] if self.tail["kind"] != "zero" else self.t[-1] * math.sqrt(self.t[-1] / self.t[-2])
        return np.concatenate([[0.0], mids, [last]])

    def to_step(self):
        """The cell-wise constant interpretation on (0, end of last cell]."""
        return StepFunction(self.cell_edges()[1:], self.samples)

    def tail_function(self):
        if self.tail["kind"] != "powerlog":
            return None
        g = float(self.tail.get("gamma", 0.0))
        d = float(self.tail.get("delta", 0.0))
        e = float(self.tail.get("epsilon", 0.0))
        base = PowerLogFunction(g, d, d, e, e)
        scale = self.samples[-1] / base(self.t_max)
        return lambda s: scale * base(s)

    def tail_exponents(self):
        return (-float(self.tail.get("gamma", 0.0)), float(self.tail.get("delta", 0.0)),
                float(self.tail.get("epsilon", 0.0)))

    def check_tail(self):
        if self.tail["kind"] == "unknown":
            raise DivergenceError("integral refused: tail behaviour beyond t_max is unknown")

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = self.to_step()(t_arr)
        tf = self.tail_function()
        if tf is not None:
            beyond = t_arr > self.t_max
            if np.any(beyond):
                out = np.where(beyond, tf(np.where(beyond, t_arr, 1.0)), out)
        return float(out) if np.ndim(t) == 0 else out

    def to_dict(self):
        return {"type": "grid", "t": self.t.tolist(), "samples": self.samples.tolist(), "tail": dict(self.tail)}


# -- rearrangement calculus --------------------------------------------------

def _tail_measure_above(gf, lam):
    """|{t > t_max : tail(t) > lam}| for a power-log tail."""
    tf = gf.tail_function()
    if tf is None or lam >= tf(gf.t_max * (1 + 1e-12)) and tf(gf.t_max * 10) <= tf(gf.t_max):
        return 0.0
    # the tail model is eventually monotone; locate the crossing on a log scale
    lo, hi = math.log(gf.t_max), math.log(gf.t_max) + 1.0
    while tf(math.exp(hi)) > lam:
        hi += 2 * (hi - lo)
        if hi > 700:
            return INF
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tf(math.exp(mid)) > lam:
            lo = mid
        else:
            hi = mid
    return math.exp(hi) - gf.t_max


def distribution(f, lam):
    """Lebesgue measure of {f > lam}."""
    if lam <= 0:
        raise DomainError("distribution level must be positive")
    if isinstance(f, GridFunction):
        step = f.to_step()
        return float(step.lengths[step.values > lam].sum()) + _tail_measure_above(f, lam)
    if isinstance(f, StepFunction):
        return float(f.lengths[f.values > lam].sum())
    raise DomainError(f"unsupported function type {type(f).__name__}")


def rearrange(f):
    """Nonincreasing rearrangement f*.

    Exact for StepFunction (sort value/measure pairs, ties kept in breakpoint
    order).  For GridFunction the cells are sorted and f* is resampled on the
    same grid; the tail model is carried over (it must be nonincreasing).
    """
    if isinstance(f, StepFunction):
        order = np.argsort(-f.values, kind="stable")
        vals = f.values[order]
        lens = f.lengths[order]
        pos = vals > 0
        return StepFunction(np.cumsum(lens[pos]), vals[pos])
    if isinstance(f, GridFunction):
        star = rearrange(f.to_step())
        return GridFunction(f.t, star_value(star, f.t), dict(f.tail))
    raise DomainError(f"unsupported function type {type(f).__name__}")


def star_value(f, t):
    """f*(t) with the right-continuous (infimum) convention."""
    star = rearrange(f) if not (isinstance(f, StepFunction) and f.is_nonincreasing()) else f
    t_arr = np.asarray(t, dtype=float)
    idx = np.searchsorted(star.breakpoints, t_arr, side="right")
    out = np.append(star.values, 0.0)[idx]
    return float(out) if np.ndim(t) == 0 else out


def star_piecewise(f):
    """f* as an exact Piecewise (StepFunction input)."""
    return rearrange(f).to_piecewise()


def double_star_piecewise(f):
    """f** = P f* as an exact Piecewise (StepFunction input)."""
    return star_piecewise(f).cumulative().mul_monomial(-1)


def max_rearrange(f, t):
    """f**(t) = (1/t) int_0^t f*."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("f** is evaluated at t > 0")
    if isinstance(f, StepFunction):
        star = rearrange(f)
        edges = np.concatenate([[0.0], star.breakpoints])
        cum = np.concatenate([[0.0], np.cumsum(star.lengths * star.values)])
        idx = np.clip(np.searchsorted(edges, t_arr, side="right") - 1, 0, len(edges) - 1)
        vals = np.append(star.values, 0.0)
        out = (cum[idx] + (t_arr - edges[idx]) * vals[idx]) / t_arr
        return float(out) if np.ndim(t) == 0 else out
    if isinstance(f, GridFunction):
        star = rearrange(f)
        step_star = rearrange(f.to_step())
        inner = max_rearrange(step_star, np.minimum(t_arr, f.t_max)) * np.minimum(t_arr, f.t_max)
        extra = np.zeros_like(t_arr)
        tf = star.tail_function()
        beyond = t_arr > f.t_max
        if np.any(beyond):
            if tf is None:
                extra = np.zeros_like(t_arr)
            else:
                from .quadrature import adaptive_gl
                extra = np.array([adaptive_gl(lambda s: tf(s), f.t_max, x, rtol=1e-10) if x > f.t_max else 0.0
                                  for x in np.atleast_1d(t_arr)]).reshape(t_arr.shape)
        out = (inner + extra) / t_arr
        return float(out) if np.ndim(t) == 0 else out
    raise DomainError(f"unsupported function type {type(f).__name__}")


def dilate(f, a):
    """D_a f(t) = f(t/a)."""
    if not a > 0:
        raise DomainError("dilation factor must be positive")
    if isinstance(f, StepFunction):
        return StepFunction(f.breakpoints * a, f.values)
    if isinstance(f, GridFunction):
        return GridFunction(f.t * a, f.samples, dict(f.tail))
    raise DomainError(f"unsupported function type {type(f).__name__}")


def subadditivity_gap(f, g, t):
    """(int_0^t (f+g)*, int_0^t f*, int_0^t g*)."""
    if t <= 0:
        raise DomainError("t must be positive")
    return (t * max_rearrange(f + g, t), t * max_rearrange(f, t), t * max_rearrange(g, t))


# -- serialization -----------------------------------------------------------

def function_from_dict(d):
    kind = d.get("type")
    try:
        if kind == "step":
            return StepFunction(d["breakpoints"], d["values"])
        if kind == "grid":
            if "t" in d:
                t = d["t"]
            else:
                g = d.get("grid", {})
                t = default_grid(g.get("t_min", 1e-8), g.get("t_max", 1e8), g.get("size", 2048))
            return GridFunction(t, d["samples"], dict(d.get("tail", {"kind": "zero"})))
        if kind == "powerlog":
            d0, dinf = d.get("delta", [0.0, 0.0])
            e0, einf = d.get("epsilon", [0.0, 0.0])
            return PowerLogFunction(float(d.get("gamma", 0.0)), float(d0), float(dinf), float(e0), float(einf))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise SpecError(f"malformed function document: {exc}") from exc
    raise SpecError(f"unknown function type {kind!r}")


def function_to_dict(f):
    return f.to_dict()
