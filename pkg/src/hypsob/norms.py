"""Rearrangement-invariant norms on (0, inf) and their associates.

Every concrete norm is compiled into a sum of *blocks*.  A block is

    ( sum_i int_{region_i} (w_i(t) F_i(t))^q dt )^(1/q)      (q < inf)
    max_i sup_{region_i} w_i(t) F_i(t)                       (q = inf)

where F_i is f* or f** and each weight is t^a l(t)^b ll(t)^c with separate
exponents on (0, 1) and [1, inf).  Lebesgue, Lorentz, Lorentz-Zygmund and
classical Lorentz norms are one block; the Z-type norms are sums of blocks.

Blocks are evaluated in x = log t: composite Gauss-Legendre panels on
|x| <= X_RANGE split at the breakpoints of f*, plus the two tails beyond,
which are integrated from the leading power-log term.  Whether an integral
or supremum is finite is decided first by comparing the exponents of the
integrand at both ends (power, then log, then log-log), so divergence is
reported as +inf with a certificate instead of a large number.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
from scipy import integrate, optimize

from .errors import DivergenceError, DomainError, RestrictedScopeError, SpecError
from .piecewise import Piecewise
from .quadrature import gl_rule
from .rearrangement import (GridFunction, PowerLogFunction, StepFunction, rearrange)

INF = math.inf
X_RANGE = 200.0      # panels cover exp(-X_RANGE) <= t <= exp(X_RANGE)
PANEL = 0.5
ORDER = 20
EXP_TOL = 1e-9       # exponents closer than this are treated as equal


def _inf_or(x):
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "+inf"):
        return INF
    return float(x)


def _enc(x):
    return "inf" if x == INF else x


def conjugate(p):
    """Hoelder conjugate exponent."""
    p = float(p)
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    # rational arithmetic keeps p -> p' -> p'' exact for exponents like 4/3
    r = Fraction(p).limit_denominator(10 ** 6)
    if abs(float(r) - p) > 1e-15 * p:
        return p / (p - 1)
    return float(r / (r - 1))


# -- values ------------------------------------------------------------------

@dataclass
class NormValue:
    """Extended-real norm value.

    ``certified`` is one of "exact", "quadrature", "lower-bound" or
    "upper-bound".  A divergent norm carries a certificate describing where
    the defining integral or supremum blows up.
    """

    value: float
    certified: str = "quadrature"
    certificate: dict = None

    def __float__(self):
        return float(self.value)

    @property
    def finite(self):
        return math.isfinite(self.value)

    def to_dict(self):
        d = {"value": _enc(self.value), "certified": self.certified}
        if self.certificate:
            d["certificate"] = {k: _enc(v) if isinstance(v, float) else v for k, v in self.certificate.items()}
        return d


# -- weights and blocks ---------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """t^a l^b ll^c with exponents ``lower`` on (0,1) and ``upper`` on [1,inf)."""

    lower: tuple = (0.0, 0.0, 0.0)
    upper: tuple = (0.0, 0.0, 0.0)

    @classmethod
    def power_log(cls, a, A=(0.0, 0.0), B=(0.0, 0.0)):
        return cls((float(a), float(A[0]), float(B[0])), (float(a), float(A[1]), float(B[1])))

    def exponents(self, at):
        return self.lower if at == 0 else self.upper

    def has_logs(self):
        return any(self.lower[1:]) or any(self.upper[1:])

    def log_value(self, x):
        """log w(e^x), vectorized in x."""
        x = np.asarray(x, dtype=float)
        lo = x < 0
        a = np.where(lo, self.lower[0], self.upper[0])
        b = np.where(lo, self.lower[1], self.upper[1])
        c = np.where(lo, self.lower[2], self.upper[2])
        ell = 1.0 + np.abs(x)
        out = a * x + b * np.log(ell)
        if np.any(c):
            out = out + c * np.log1p(np.log(ell))
        return out

    def __call__(self, t):
        return np.exp(self.log_value(np.log(np.asarray(t, dtype=float))))

    def to_dict(self):
        return {"lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(float(v) for v in d["lower"]), tuple(float(v) for v in d["upper"]))


_REGIONS = ("all", "lower", "upper")


@dataclass(frozen=True)
class Segment:
    source: str = "star"        # "star" for f*, "dstar" for f**
    region: str = "all"         # (0,inf), (0,1) or [1,inf)
    weight: Weight = Weight()

    def __post_init__(self):
        if self.source not in ("star", "dstar"):
            raise SpecError(f"unknown source {self.source!r}")
        if self.region not in _REGIONS:
            raise SpecError(f"unknown region {self.region!r}")

    def to_dict(self):
        return {"source": self.source, "region": self.region, "weight": self.weight.to_dict()}


@dataclass(frozen=True)
class Block:
    q: float
    segments: tuple


# -- space specifications ------------------------------------------------------

@dataclass(frozen=True)
class Lebesgue:
    p: float

    def __post_init__(self):
        if not (1 <= self.p <= INF):
            raise SpecError("Lebesgue exponent must lie in [1, inf]")


@dataclass(frozen=True)
class Lorentz:
    """L^{p,q}; ``form`` selects the f* ("raw"), f** ("maximal") or default functional."""

    p: float
    q: float
    form: str = "auto"

    def __post_init__(self):
        ok = (1 < self.p < INF and 1 <= self.q <= INF) or (self.p == self.q == 1) or (self.p == self.q == INF)
        if not ok:
            raise SpecError(f"illegal Lorentz parameters p={self.p}, q={self.q}")
        _check_form(self.form)


@dataclass(frozen=True)
class LorentzZygmund:
    p: float
    q: float
    A: tuple = (0.0, 0.0)
    B: tuple = (0.0, 0.0)
    form: str = "auto"

    def __post_init__(self):
        if not (1 <= self.p <= INF and 1 <= self.q <= INF):
            raise SpecError("Lorentz-Zygmund exponents must lie in [1, inf]")
        object.__setattr__(self, "A", tuple(float(a) for a in self.A))
        object.__setattr__(self, "B", tuple(float(b) for b in self.B))
        if len(self.A) != 2 or len(self.B) != 2:
            raise SpecError("A and B are pairs [at 0, at inf]")
        _check_form(self.form)


@dataclass(frozen=True)
class ClassicalLorentz:
    """Lambda^q_v: ||v f*||_{L^q}."""

    q: float
    weight: Weight

    def __post_init__(self):
        if not (1 <= self.q <= INF):
            raise SpecError("q must lie in [1, inf]")


@dataclass(frozen=True)
class Weighted:
    """General one-block functional (used for the limiting displays)."""

    q: float
    segments: tuple

    def __post_init__(self):
        if not (1 <= self.q <= INF):
            raise SpecError("q must lie in [1, inf]")


@dataclass(frozen=True)
class Intersection:
    spaces: tuple


@dataclass(frozen=True)
class Sum:
    spaces: tuple

    def __post_init__(self):
        if len(self.spaces) != 2:
            raise SpecError("a sum space has exactly two summands")


@dataclass(frozen=True)
class OperatorInduced:
    """nu/sigma/lambda/mu functional: base-norm of an operator applied to g* (or g**)."""

    kind: str
    m: int
    n: int
    base: object

    def __post_init__(self):
        if self.kind not in ("nu", "sigma", "lambda", "mu"):
            raise SpecError(f"unknown operator-induced kind {self.kind!r}")
        if not (1 <= self.m < self.n):
            raise DomainError("need 1 <= m < n")


@dataclass(frozen=True)
class Named:
    """Z1, Z2 or Z3 with parameters m, n (and alpha_inf for Z3)."""

    name: str
    m: int
    n: int
    alpha_inf: float = 0.0

    def __post_init__(self):
        if self.name not in ("Z1", "Z2", "Z3"):
            raise SpecError(f"unknown named space {self.name!r}")
        if not (1 <= self.m < self.n):
            raise DomainError("need 1 <= m < n")


@dataclass(frozen=True)
class Associate:
    """X' evaluated as a supremum over a test family (lower bound)."""

    base: object


def _check_form(form):
    if form not in ("auto", "raw", "maximal"):
        raise SpecError(f"unknown functional form {form!r}")


# -- legality ----------------------------------------------------------------

def _lex(*vals):
    """Sign of the lexicographically first nonzero entry (0 if all vanish)."""
    for v in vals:
        if abs(v) > EXP_TOL:
            return 1 if v > 0 else -1
    return 0


def lz_is_norm(p, q, A, B=(0.0, 0.0)):
    """Whether L^{p,q;A,B} is equivalent to a rearrangement-invariant norm.

    With B = 0 these are the four conditions
    p = q = 1, a0 >= 0, a_inf <= 0;  1 < p < inf;
    p = inf, q < inf, a0 + 1/q < 0;  p = q = inf, a0 <= 0.
    A nonzero B breaks ties in the log exponents lexicographically.
    """
    p, q = _inf_or(p), _inf_or(q)
    a0, ainf = (float(a) for a in A)
    b0, binf = (float(b) for b in B)
    if not (1 <= p <= INF and 1 <= q <= INF):
        return False
    if p == 1:
        return q == 1 and _lex(a0, b0) >= 0 and _lex(ainf, binf) <= 0
    if p < INF:
        return True
    if q < INF:
        return _lex(a0 + 1.0 / q, b0 + 1.0 / q) < 0
    return _lex(a0, b0) <= 0


def _lz_from(space):
    if isinstance(space, Lebesgue):
        return LorentzZygmund(space.p, space.p)
    if isinstance(space, Lorentz):
        return LorentzZygmund(space.p, space.q, form=space.form)
    return space


def check_legal(space):
    """Raise SpecError unless the space is a legal r.i. norm specification."""
    if isinstance(space, LorentzZygmund):
        if not lz_is_norm(space.p, space.q, space.A, space.B):
            raise SpecError(f"L^{{{space.p},{space.q};{list(space.A)}}} is not equivalent to a norm")
    elif isinstance(space, (Intersection, Sum)):
        for s in space.spaces:
            check_legal(s)
    elif isinstance(space, (OperatorInduced, Associate)):
        check_legal(space.base)
    elif not isinstance(space, (Lebesgue, Lorentz, ClassicalLorentz, Weighted, Named)):
        raise SpecError(f"unsupported space {space!r}")
    return space


def associate_space(space):
    """Associate space of a Lebesgue, Lorentz or Lorentz-Zygmund space.

    (L^{p,q;A,B})' = L^{p',q';-A,-B}; the functional form is kept.  An LZ
    input must be legal or the associate of a legal space.
    """
    if isinstance(space, Lebesgue):
        return Lebesgue(conjugate(space.p))
    if isinstance(space, Lorentz):
        return Lorentz(conjugate(space.p), conjugate(space.q), space.form)
    if isinstance(space, LorentzZygmund):
        dual = LorentzZygmund(conjugate(space.p), conjugate(space.q), tuple(-a for a in space.A),
                              tuple(-b for b in space.B), space.form)
        # the associate of a legal space is accepted too, so X -> X' -> X'' closes
        if not (lz_is_norm(space.p, space.q, space.A, space.B) or lz_is_norm(dual.p, dual.q, dual.A, dual.B)):
            check_legal(space)
        return dual
    if isinstance(space, Intersection):
        if len(space.spaces) != 2:
            raise RestrictedScopeError("associate of an intersection is implemented for two spaces")
        return Sum(tuple(associate_space(s) for s in space.spaces))
    if isinstance(space, Sum):
        return Intersection(tuple(associate_space(s) for s in space.spaces))
    if isinstance(space, Associate):
        return space.base
    return Associate(space)


# -- compilation to blocks ---------------------------------------------------------

def lz_form(space):
    """Resolve "auto": f* when that functional is already a norm, else f**."""
    space = _lz_from(space)
    if space.form != "auto":
        return space.form
    if space.p == 1:
        return "raw"
    logs = any(space.A) or any(space.B)
    if space.p < INF and space.q <= space.p and not logs:
        return "raw"
    if space.p == space.q == INF and not logs:
        return "raw"
    return "maximal"


def _blocks(space):
    if isinstance(space, (Lebesgue, Lorentz, LorentzZygmund)):
        lz = _lz_from(space)
        src = "dstar" if lz_form(lz) == "maximal" else "star"
        a = (1.0 / lz.p if lz.p < INF else 0.0) - (1.0 / lz.q if lz.q < INF else 0.0)
        return [Block(lz.q, (Segment(src, "all", Weight.power_log(a, lz.A, lz.B)),))]
    if isinstance(space, ClassicalLorentz):
        return [Block(space.q, (Segment("star", "all", space.weight),))]
    if isinstance(space, Weighted):
        return [Block(space.q, tuple(space.segments))]
    if isinstance(space, Named):
        return named_blocks(space)
    raise SpecError(f"space {space!r} does not compile to blocks")


def named_blocks(space):
    n, m = space.n, space.m
    lead = Weight((-m / n, 0.0, 0.0), (0.0, 0.0, 0.0))
    if space.name == "Z1":
        return [Block(1.0, (Segment("star", "lower", lead),)),
                Block(INF, (Segment("dstar", "upper", Weight(upper=(1.0, -(m - 1) / 2, 0.0))),))]
    if space.name == "Z2":
        return [Block(INF, (Segment("dstar", "lower", Weight(lower=((n - m) / n, 0.0, 0.0))),)),
                Block(INF, (Segment("dstar", "upper", Weight(upper=(1.0, -m / 2, 0.0))),))]
    ceil_half = math.ceil(m / 2)
    return [Block(INF, (Segment("star", "all", Weight()),)),
            Block(INF, (Segment("dstar", "upper", Weight(upper=(0.0, space.alpha_inf - ceil_half, 0.0))),))]


# -- weights of the optimal target table ------------------------------------------

def v1_weight(n, m, p, q, A):
    qi = 1.0 / q if q < INF else 0.0
    return Weight(((n - m * p) / (n * p) - qi, A[0], 0.0), (1.0 / p - qi, A[1], 0.0))


def v2_weight(n, m, q, A):
    qi = 1.0 / q if q < INF else 0.0
    return Weight((-qi, A[0] - 1.0, 0.0), (m / n - qi, A[1], 0.0))


def v3_weight(n, m, q, A):
    qi = 1.0 / q if q < INF else 0.0
    return Weight((-qi, -qi, -1.0), (m / n - qi, A[1], 0.0))


# -- nonincreasing representations -------------------------------------------------

def _lead_dstar(lead, at, total):
    """Leading term of f** from that of f* = c t^p l^k ll^e (None: vanishes near inf)."""
    if at == 0:
        if lead is None:
            return None
        c, p, k, e = lead
        if p > -1 + EXP_TOL:
            return c / (p + 1), p, k, e
        return "inf"
    if lead is None:
        return (total, -1.0, 0.0, 0.0)
    c, p, k, e = lead
    if p > -1 + EXP_TOL:
        return c / (p + 1), p, k, e
    if p < -1 - EXP_TOL or k < -1 - EXP_TOL:
        return (total, -1.0, 0.0, 0.0)
    if k > -1 + EXP_TOL:
        return c / (k + 1), -1.0, k + 1, e
    if e < -1 - EXP_TOL:
        return (total, -1.0, 0.0, 0.0)
    return c, -1.0, 0.0, e + 1


class PiecewiseStar:
    """A nonincreasing function f* held in the exact algebra."""

    def __init__(self, g, exact_step=None, note=None):
        self.g = g
        self.exact_step = exact_step   # (breakpoints, values) when f* is a step function
        self.note = note
        self._dstar = None
        self._dstar_inf = False

    @property
    def breaks(self):
        return self.g.breaks

    def is_zero(self):
        return self.g.is_zero()

    def dstar(self):
        if self._dstar is None and not self._dstar_inf:
            try:
                self._dstar = self.g.cumulative().mul_monomial(-1)
            except DivergenceError:
                self._dstar_inf = True
        return self._dstar

    def dstar_infinite(self):
        self.dstar()
        return self._dstar_inf

    def values(self, source, t):
        if source == "star":
            return self.g(t)
        return self.dstar()(t)

    def lead(self, source, at):
        h = self.g if source == "star" else self.dstar()
        lead = h.leading(at)
        if lead is None:
            return None
        c, p, k = lead
        return abs(c), float(p), float(k), 0.0

    def limit0(self, source):
        """f*(0+) or f**(0+) (both equal ess sup f)."""
        lead = self.lead("star", 0)
        if lead is None:
            return 0.0
        c, p, k, _ = lead
        if p < -EXP_TOL or (abs(p) <= EXP_TOL and k > 0):
            return INF
        if p > EXP_TOL:
            return 0.0
        return c


class PowerLogStar:
    """A nonincreasing closed-form power-log function."""

    note = "closed-form power-log"
    exact_step = None

    def __init__(self, h):
        self.h = h
        self.breaks = np.array([1.0])

    def is_zero(self):
        return False

    def dstar_infinite(self):
        return self.lead("dstar", 0) == "inf"

    def _cum(self, t):
        """int_0^t h for an array of t (GL8 on a mesh of width <= 0.5 in log t)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        xs = np.log(t)
        x0 = min(float(xs.min()), -X_RANGE) - 1.0
        head, _ = integrate.quad(lambda x: float(self.h(math.exp(x))) * math.exp(x), -np.inf, x0,
                                 epsrel=1e-12, limit=200)
        mesh = np.unique(np.concatenate([xs, np.arange(x0, xs.max() + 0.5, 0.5), [0.0]]))
        mesh = mesh[mesh >= x0]
        gx, gw = gl_rule(8)
        lo, hi = mesh[:-1], mesh[1:]
        nodes = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * gx[None, :]
        vals = self.h(np.exp(nodes)) * np.exp(nodes)
        steps = (0.5 * (hi - lo)[:, None] * vals * gw[None, :]).sum(axis=1)
        cum = head + np.concatenate([[0.0], np.cumsum(steps)])
        return cum[np.searchsorted(mesh, xs)]

    def values(self, source, t):
        if source == "star":
            return self.h(t)
        t = np.asarray(t, dtype=float)
        return (self._cum(t.ravel()) / t.ravel()).reshape(t.shape)

    def lead(self, source, at):
        e = self.h.exponents(at)
        lead = (1.0, e[0], e[1], e[2])
        if source == "star":
            return lead
        return _lead_dstar(lead, at, self._total() if at != 0 else 0.0)

    def _total(self):
        val, _ = integrate.quad(lambda x: float(self.h(math.exp(x))) * math.exp(x), -np.inf, np.inf, limit=400)
        return val

    def limit0(self, source):
        p, k, e = self.h.exponents(0)
        if _lex(-p, k, e) > 0:
            return INF
        if _lex(p, -k, -e) > 0:
            return 0.0
        return 1.0


def _sample_points(g):
    pts = []
    for i in range(len(g.pieces)):
        lo, hi = g.edges[i], g.edges[i + 1]
        a = lo if lo > 0 else hi * 1e-12
        b = hi if hi < INF else max(lo, 1.0) * 1e12
        pts.append(np.geomspace(a, b, 24)[1:] if a > 0 else np.geomspace(b * 1e-12, b, 24))
    return np.unique(np.concatenate(pts))


def piecewise_is_nonincreasing(g, rtol=1e-11):
    t = _sample_points(g)
    v = g(t)
    scale = max(float(np.max(np.abs(v))), 1e-300)
    return bool(np.all(v >= -rtol * scale) and np.all(np.diff(v) <= rtol * scale))


def numeric_rearrangement(g, per_decade=64):
    """Approximate f* of a nonnegative Piecewise that need not be monotone.

    The function is sampled at geometric cell midpoints on [t_lo, t_hi]; the
    cells are sorted by value (exact for step functions).  Beyond t_hi the
    original tail (assumed nonincreasing) is kept, and below t_lo the
    original head is kept when it dominates, otherwise it becomes one more
    cell.  Level sets are therefore reproduced up to the measure of the
    cells straddling a level.
    """
    br = g.breaks
    first = min(1.0, float(br[0])) if br.size else 1.0
    last = max(1.0, float(br[-1])) if br.size else 1.0
    t_lo = first * 1e-10
    end = g.support_end
    t_hi = end if end < INF else last * 1e10
    decades = math.log10(t_hi / t_lo)
    edges = np.unique(np.concatenate([np.geomspace(t_lo, t_hi, int(decades * per_decade) + 2),
                                      br[(br > t_lo) & (br < t_hi)]]))
    mids = np.sqrt(edges[:-1] * edges[1:])
    vals = np.maximum(g(mids), 0.0)
    lens = np.diff(edges)
    head_val = float(g(t_lo))
    lead0 = g.leading(0)
    head_exact = lead0 is not None and (lead0[1] < 0 or (lead0[1] == 0 and lead0[2] > 0)) and head_val >= vals.max()
    if not head_exact:
        vals = np.append(vals, head_val)
        lens = np.append(lens, t_lo)
    order = np.argsort(-vals, kind="stable")
    vals, lens = vals[order], lens[order]
    start = t_lo if head_exact else 0.0
    cut = start + np.cumsum(lens)
    cut[-1] = t_hi
    keep = np.ones(cut.size, dtype=bool)
    keep[:-1] = cut[:-1] < cut[1:]
    cut, vals = cut[keep], vals[keep]
    body = Piecewise.from_step(cut, vals)
    if start > 0:
        body = body.restrict(start, INF) + g.restrict(0.0, start)
    if end == INF:
        body = body + g.restrict(t_hi, INF)
    return body


def as_star(f):
    """Nonincreasing rearrangement of an admissible function."""
    if isinstance(f, (PiecewiseStar, PowerLogStar)):
        return f
    if isinstance(f, StepFunction):
        s = rearrange(f)
        return PiecewiseStar(s.to_piecewise(), exact_step=(s.breakpoints, s.values))
    if isinstance(f, GridFunction):
        s = rearrange(f)
        base = s.to_step()
        tail = s.tail
        g = base.to_piecewise()
        if tail["kind"] == "powerlog":
            gam = float(tail.get("gamma", 0.0))
            d = float(tail.get("delta", 0.0))
            if tail.get("epsilon", 0) or d != int(d) or d < 0:
                raise RestrictedScopeError("grid tails need an integer log exponent and no log-log factor")
            tf = s.tail_function()
            edge = s.cell_edges()[-1]
            c = float(tf(edge)) / (edge ** (-gam) * math.log(edge) ** d if d else edge ** (-gam))
            g = g + Piecewise.monomial(-gam, c, int(d), lo=edge)
            return PiecewiseStar(g, note="grid rearrangement")
        if tail["kind"] == "unknown":
            raise DivergenceError("tail behaviour beyond the grid is unknown")
        return PiecewiseStar(g, exact_step=(base.breakpoints, base.values), note="grid rearrangement")
    if isinstance(f, Piecewise):
        if f.is_zero():
            return PiecewiseStar(f, exact_step=(np.array([]), np.array([])))
        if piecewise_is_nonincreasing(f):
            return PiecewiseStar(f)
        return PiecewiseStar(numeric_rearrangement(f), note="numeric rearrangement")
    if isinstance(f, PowerLogFunction):
        t = np.geomspace(1e-12, 1e12, 600)
        v = f(t)
        if np.any(np.diff(v) > 1e-12 * np.max(v)):
            raise RestrictedScopeError("power-log function is not nonincreasing; rearrange it first")
        return PowerLogStar(f)
    raise DomainError(f"unsupported function type {type(f).__name__}")


# -- block evaluation ------------------------------------------------------------

def _classify_integral(P, L, E, q, at):
    """Is int (t^P l^L ll^E)^q dt finite near ``at``?"""
    s = q * P + 1.0
    if abs(s) > EXP_TOL:
        return s > 0 if at == 0 else s < 0
    return _lex(q * L + 1.0, q * E + 1.0) < 0


def _classify_sup(P, L, E, at):
    """Is t^P l^L ll^E bounded near ``at``?  Returns (bounded, limit factor)."""
    sgn = 1 if at == 0 else -1
    s = _lex(sgn * P, -L, -E)      # > 0: decays, < 0: blows up
    if s > 0:
        return True, 0.0
    if s < 0:
        return False, INF
    return True, 1.0


def _tail_integral(C, P, L, E, q, at, X):
    """int over |x| > X (toward ``at``) of (C t^P l^L ll^E)^q dt with l = 1+|x|."""
    if C == 0:
        return 0.0
    gamma = -(q * P + 1.0) if at != 0 else (q * P + 1.0)   # decay rate in |x|
    lq, eq = q * L, q * E
    logC = q * math.log(C)
    if gamma > EXP_TOL:
        if gamma * X > 700:
            return 0.0
        f = lambda y: math.exp(logC - gamma * y + lq * math.log1p(y) + (eq * math.log1p(math.log1p(y)) if eq else 0.0))
        val, _ = integrate.quad(f, X, np.inf, epsrel=1e-10, limit=200)
        return val
    # gamma == 0: substitute u = log(1+y), dy = e^u du
    u0 = math.log1p(X)
    if abs(lq + 1) <= EXP_TOL:
        return math.exp(logC) * (1 + u0) ** (eq + 1) / (-eq - 1)
    f = lambda u: math.exp(logC + (lq + 1) * u + (eq * math.log1p(u) if eq else 0.0))
    val, _ = integrate.quad(f, u0, np.inf, epsrel=1e-10, limit=200)
    return val


def _panels(lo, hi, cuts):
    """Composite GL nodes/weights on [lo, hi] (in x) split at ``cuts``."""
    pts = np.unique(np.concatenate([[lo, hi], [c for c in cuts if lo < c < hi]]))
    gx, gw = gl_rule(ORDER)
    a_list, b_list = [], []
    for a, b in zip(pts[:-1], pts[1:]):
        k = max(1, int(math.ceil((b - a) / PANEL)))
        sub = np.linspace(a, b, k + 1)
        a_list.append(sub[:-1])
        b_list.append(sub[1:])
    a = np.concatenate(a_list)
    b = np.concatenate(b_list)
    nodes = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * gx[None, :]
    weights = 0.5 * (b - a)[:, None] * gw[None, :]
    return nodes.ravel(), weights.ravel()


def _region_bounds(region, lo=None, hi=None):
    x_lo, x_hi = {"all": (-INF, INF), "lower": (-INF, 0.0), "upper": (0.0, INF)}[region]
    if lo is not None and lo > 0:
        x_lo = max(x_lo, math.log(lo))
    if hi is not None and hi < INF:
        x_hi = min(x_hi, math.log(hi))
    return x_lo, x_hi


def _segment_lead(star, seg, at):
    """Leading (C, P, L, E) of w F near ``at`` (None if F vanishes there, "inf" if F = inf)."""
    lead = star.lead(seg.source, at)
    if lead is None or lead == "inf":
        return lead
    c, p, k, e = lead
    a, b, cc = seg.weight.exponents(at)
    return c, a + p, b + k, cc + e


def _segment_integral(star, seg, q, trunc):
    """int_region (w F)^q dt; returns (value, certificate-or-None)."""
    x_lo, x_hi = _region_bounds(seg.region, *trunc)
    if x_hi <= x_lo:
        return 0.0, None
    if seg.source == "dstar" and star.dstar_infinite():
        return INF, {"reason": "f** is infinite (f* not integrable near 0)"}
    total = 0.0
    for at, x_end in ((0, x_lo), (INF, x_hi)):
        if math.isfinite(x_end):
            continue
        lead = _segment_lead(star, seg, at)
        if lead is None:
            continue
        C, P, L, E = lead
        if not _classify_integral(P, L, E, q, at):
            body = _panel_value(star, seg, q, max(x_lo, -X_RANGE), min(x_hi, X_RANGE))
            return INF, {"end": "0" if at == 0 else "inf", "exponents": [q * P + 1.0, q * L, q * E],
                         "truncated_value": body, "t_range": [math.exp(-X_RANGE), math.exp(X_RANGE)]}
        total += _tail_integral(C, P, L, E, q, at, X_RANGE)
    total += _panel_value(star, seg, q, max(x_lo, -X_RANGE), min(x_hi, X_RANGE))
    return total, None


def _cuts(star):
    br = star.breaks
    return np.log(br[br > 0]) if br.size else np.array([])


def _panel_value(star, seg, q, a, b):
    if b <= a:
        return 0.0
    x, w = _panels(a, b, np.concatenate([_cuts(star), [0.0]]))
    t = np.exp(x)
    F = star.values(seg.source, t)
    logw = seg.weight.log_value(x)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        vals = np.where(F > 0, np.exp(q * (logw + np.log(np.where(F > 0, F, 1.0))) + x), 0.0)
    return float(np.dot(w, vals))


def _segment_sup(star, seg, trunc):
    x_lo, x_hi = _region_bounds(seg.region, *trunc)
    if x_hi < x_lo:
        return 0.0, None
    if seg.source == "dstar" and star.dstar_infinite():
        return INF, {"reason": "f** is infinite (f* not integrable near 0)"}
    best = 0.0
    for at, x_end in ((0, x_lo), (INF, x_hi)):
        if math.isfinite(x_end):
            continue
        lead = _segment_lead(star, seg, at)
        if lead is None:
            continue
        C, P, L, E = lead
        ok, factor = _classify_sup(P, L, E, at)
        if not ok:
            return INF, {"end": "0" if at == 0 else "inf", "exponents": [P, L, E]}
        best = max(best, C * factor)
    a, b = max(x_lo, -X_RANGE), min(x_hi, X_RANGE)
    cuts = _cuts(star)
    x, _ = _panels(a, b, np.concatenate([cuts, [0.0]])) if b > a else (np.array([]), None)
    # left limits at the breaks (F is left-continuous there) and the region ends
    extra = [c for c in cuts if a <= c <= b] + [a, b]
    x = np.sort(np.concatenate([x, extra]))

    def h(xv):
        xv = np.atleast_1d(xv)
        F = star.values(seg.source, np.exp(xv))
        with np.errstate(divide="ignore"):
            return np.where(F > 0, np.exp(seg.weight.log_value(xv) + np.log(np.where(F > 0, F, 1.0))), 0.0)

    vals = h(x)
    i = int(np.argmax(vals))
    best = max(best, float(vals[i]))
    lo_i, hi_i = max(i - 1, 0), min(i + 1, x.size - 1)
    if hi_i > lo_i:
        res = optimize.minimize_scalar(lambda s: -float(h(s)[0]), bounds=(x[lo_i], x[hi_i]), method="bounded",
                                       options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best, None


def _block_value(star, block, trunc=(None, None)):
    if block.q == INF:
        best, cert = 0.0, None
        for seg in block.segments:
            v, c = _segment_sup(star, seg, trunc)
            if v == INF:
                return INF, c
            best = max(best, v)
        return best, cert
    total = 0.0
    for seg in block.segments:
        v, c = _segment_integral(star, seg, block.q, trunc)
        if v == INF:
            return INF, c
        total += v
    return total ** (1.0 / block.q), None


def _exact_step_block(star, block):
    """Closed form for a step f* and a pure power weight on the whole line."""
    if star.exact_step is None or len(block.segments) != 1:
        return None
    seg = block.segments[0]
    if seg.source != "star" or seg.region != "all" or seg.weight.has_logs() or seg.weight.lower[0] != seg.weight.upper[0]:
        return None
    a = seg.weight.lower[0]
    b, v = star.exact_step
    if b.size == 0:
        return 0.0
    edges = np.concatenate([[0.0], b])
    if block.q == INF:
        if a == 0:
            return float(v.max())
        if a < 0:
            return INF
        return float(np.max(v * b ** a))
    s = block.q * a
    if s <= -1:
        return INF
    seg_int = (b ** (s + 1) - edges[:-1] ** (s + 1)) / (s + 1)
    return float(np.dot(v ** block.q, seg_int)) ** (1.0 / block.q)


def _is_compiled(space):
    return isinstance(space, (Lebesgue, Lorentz, LorentzZygmund, ClassicalLorentz, Weighted, Named))


def norm(space, f, trunc=(None, None)):
    """Norm of f in ``space`` as a NormValue (+inf with certificate when divergent).

    ``trunc=(lo, hi)`` restricts every defining integral or supremum to
    (lo, hi); it is used for divergence certificates.
    """
    space = check_legal(space)
    if isinstance(space, Intersection):
        vals = [norm(s, f, trunc) for s in space.spaces]
        worst = max(vals, key=lambda v: v.value)
        cert = "quadrature" if any(v.certified != "exact" for v in vals) else "exact"
        return NormValue(worst.value, cert, worst.certificate)
    if isinstance(space, Sum):
        return sum_norm(space, f)
    if isinstance(space, OperatorInduced):
        from .targets import operator_functional
        return operator_functional(space.kind, space.m, space.base, f, space.n, trunc=trunc)
    if isinstance(space, Associate):
        return associate_norm_lower_bound(space.base, f, default_family(f))
    star = as_star(f)
    if star.is_zero():
        return NormValue(0.0, "exact")
    blocks = _blocks(space)
    if trunc == (None, None) and len(blocks) == 1:
        ex = _exact_step_block(star, blocks[0])
        if ex is not None:
            return NormValue(ex, "exact")
    total = 0.0
    for block in blocks:
        v, cert = _block_value(star, block, trunc)
        if v == INF:
            return NormValue(INF, "quadrature", cert)
        total += v
    return NormValue(total, "quadrature", {"note": star.note} if star.note else None)


def norm_value(space, f, **kw):
    """Plain float version of ``norm``."""
    return norm(space, f, **kw).value


def lorentz_raw_quasinorm(p, q, f):
    """||t^{1/p-1/q} f*||_{L^q}: the f*-based functional, a quasinorm when q > p."""
    return norm(LorentzZygmund(_inf_or(p), _inf_or(q), form="raw"), f)


# -- sums ------------------------------------------------------------------------

def _split_star(star, tau):
    """Rearrangements of f* chi_(0,tau) and f* chi_(tau,inf)."""
    if star.exact_step is not None:
        b, v = star.exact_step
        lower = np.concatenate([[0.0], b[:-1]])
        inhead = lower < tau
        head = StepFunction(np.minimum(b[inhead], tau), v[inhead])
        intail = b > tau
        return as_star(head), as_star(StepFunction(b[intail] - tau, v[intail]))
    return PiecewiseStar(star.g.restrict(0.0, tau)), as_star(star.g.restrict(tau, INF))


def sum_norm(space, f, taus=None):
    """Upper bound for ||f||_{X+Y} from splits f* = f* chi_(0,tau) + f* chi_(tau,inf)."""
    X, Y = space.spaces
    star = as_star(f)
    if star.is_zero():
        return NormValue(0.0, "exact")
    if not isinstance(star, PiecewiseStar):
        raise RestrictedScopeError("sum norms need a piecewise representation of f*")
    if taus is None:
        br = star.breaks
        taus = np.unique(np.concatenate([br, np.geomspace(1e-6, 1e6, 49)]))
    best = min(norm(X, f).value, norm(Y, f).value)
    best_tau = None
    for tau in taus:
        head, tail = _split_star(star, float(tau))
        for A, B in ((X, Y), (Y, X)):
            v = norm(A, head).value + norm(B, tail).value
            if v < best:
                best, best_tau = v, float(tau)
    return NormValue(best, "upper-bound", {"split": best_tau})


# -- associate norms and Hoelder -----------------------------------------------------

def _pair_integral(f, g):
    """int_0^inf f* g* (exact in the piecewise algebra)."""
    a, b = as_star(f), as_star(g)
    if not isinstance(a, PiecewiseStar) or not isinstance(b, PiecewiseStar):
        raise RestrictedScopeError("pairing needs piecewise representations")
    return (a.g * b.g).integral()


def default_family(f=None, sizes=np.geomspace(1e-6, 1e6, 61)):
    fam = [StepFunction.indicator(float(a)) for a in sizes]
    if f is not None:
        star = as_star(f)
        if star.exact_step is not None and star.exact_step[0].size:
            b, v = star.exact_step
            for s in (0.25, 0.5, 1.0, 2.0, 3.0):
                fam.append(StepFunction(b, v ** s))
    return fam


def associate_norm_lower_bound(space, f, family):
    """max over g in family of int f* g* / ||g||_X, a lower bound for ||f||_{X'}."""
    best = 0.0
    witness = None
    if as_star(f).is_zero():
        return NormValue(0.0, "lower-bound", {"witness": None})
    for i, g in enumerate(family):
        ng = norm(space, g).value
        if not (ng > 0) or ng == INF:
            continue
        val = _pair_integral(f, g) / ng
        if val > best:
            best, witness = val, i
    return NormValue(best, "lower-bound", {"witness": witness})


def holder_gap(f, g, space):
    """(int f g, ||f||_X ||g||_{X'}).

    For Lebesgue, Lorentz and Lorentz-Zygmund X both factors use the f*
    functional, for which the weights cancel and the inequality holds with
    constant one.
    """
    space = check_legal(space)
    if isinstance(space, (Lebesgue, Lorentz, LorentzZygmund)):
        lz = _lz_from(space)
        X = LorentzZygmund(lz.p, lz.q, lz.A, lz.B, form="raw")
        Xa = LorentzZygmund(conjugate(lz.p), conjugate(lz.q), tuple(-a for a in lz.A),
                            tuple(-b for b in lz.B), form="raw")
        lhs = (_as_pw(f) * _as_pw(g)).integral()
        return lhs, norm(X, f).value * norm(Xa, g).value
    raise RestrictedScopeError("holder_gap supports Lebesgue, Lorentz and Lorentz-Zygmund spaces")


def _as_pw(f):
    from .hardy import as_piecewise
    return as_piecewise(f)


# -- power-log membership ------------------------------------------------------------

def powerlog_membership(g, space, half="upper"):
    """Decide whether g chi_(0,1) (half="lower") or g chi_(1,inf) (half="upper") lies in ``space``.

    ``g`` is a PowerLogFunction; the decision compares the exponents of the
    defining integrand or supremum at the relevant end (power, then log,
    then log-log).  Supported spaces: Lebesgue, Lorentz, Lorentz-Zygmund and
    intersections/sums of these.
    """
    if isinstance(space, Intersection):
        return all(powerlog_membership(g, s, half) for s in space.spaces)
    if isinstance(space, Sum):
        return any(powerlog_membership(g, s, half) for s in space.spaces)
    if not isinstance(space, (Lebesgue, Lorentz, LorentzZygmund)):
        raise SpecError("powerlog_membership supports Lebesgue, Lorentz and Lorentz-Zygmund spaces")
    if half not in ("lower", "upper"):
        raise SpecError("half must be 'lower' or 'upper'")
    lz = _lz_from(space)
    src = "dstar" if lz_form(lz) == "maximal" else "star"
    a = (1.0 / lz.p if lz.p < INF else 0.0) - (1.0 / lz.q if lz.q < INF else 0.0)
    w = Weight.power_log(a, lz.A, lz.B)
    const = (1.0, 0.0, 0.0, 0.0)
    if half == "lower":
        P, L, E = g.exponents(0)
        lead0 = (1.0, P, L, E) if _lex(-P, L, E) > 0 else const
        leadinf = None
        total = 1.0 if _classify_integral(P, L, E, 1.0, 0) else INF
    else:
        P, L, E = g.exponents(INF)
        growth = _lex(P, L, E)
        if growth > 0:
            return False     # unbounded at infinity: f* is identically infinite
        lead0 = const
        leadinf = const if growth == 0 else (1.0, P, L, E)
        total = 1.0 if growth < 0 and _classify_integral(P, L, E, 1.0, INF) else INF
    for at, lead in ((0, lead0), (INF, leadinf)):
        if src == "dstar":
            if total == INF and at == 0 and half == "lower":
                return False
            lead = _lead_dstar(lead, at, total)
            if lead == "inf":
                return False
        if lead is None:
            continue
        _, p, k, e = lead
        wa, wb, wc = w.exponents(at)
        Pt, Lt, Et = p + wa, k + wb, e + wc
        if lz.q == INF:
            ok, _ = _classify_sup(Pt, Lt, Et, at)
        else:
            ok = _classify_integral(Pt, Lt, Et, lz.q, at)
        if not ok:
            return False
    return True


# -- boundedness of f -> f** (Boyd-type decisions) ---------------------------------------

def maximal_bounded(space, on="X"):
    """Analytic decision: is f -> f** bounded on X (on="X") or on X' (on="X'")?

    For Lebesgue, Lorentz and Lorentz-Zygmund spaces this holds on X iff
    p > 1 and on X' iff p < inf.  Intersections and sums are decided
    componentwise (bounded on every component).
    """
    if on not in ("X", "X'"):
        raise SpecError("on must be 'X' or \"X'\"")
    if isinstance(space, (Intersection, Sum)):
        return all(maximal_bounded(s, on) for s in space.spaces)
    if isinstance(space, (Lebesgue, Lorentz, LorentzZygmund)):
        p = _lz_from(space).p
        return p > 1 if on == "X" else p < INF
    raise RestrictedScopeError(f"no analytic boundedness rule for {type(space).__name__}")


def dilation_index_estimate(space, a_values=tuple(2.0 ** j for j in range(1, 11)), sizes=None):
    """Estimate log||D_a||/log a from the fundamental function phi(s) = ||chi_(0,s)||.

    Returns (index estimate at the largest a, list of per-a estimates).  The
    fundamental-function ratio is a lower bound for ||D_a||.
    """
    if sizes is None:
        sizes = np.geomspace(1e-8, 1e8, 33)
    fund = {}

    def phi_s(s):
        if s not in fund:
            fund[s] = norm(space, StepFunction.indicator(s)).value
        return fund[s]

    ests = []
    for a in a_values:
        ratio = max(phi_s(float(s * a)) / phi_s(float(s)) for s in sizes)
        ests.append(math.log(ratio) / math.log(a))
    return ests[-1], ests


def boyd_cross_check(space, on="X", threshold=0.95):
    """Analytic decision together with the numeric dilation-index estimate.

    The numeric side declares boundedness when the index estimate at a = 2^10
    is below ``threshold``; ``agree`` compares both decisions.
    """
    analytic = maximal_bounded(space, on)
    target = space if on == "X" else associate_space(space)
    est, ests = dilation_index_estimate(target)
    numeric = est < threshold
    return {"analytic": analytic, "numeric": numeric, "index_estimate": est, "estimates": ests,
            "agree": analytic == numeric}


# -- JSON ---------------------------------------------------------------------------

_ALIASES = {"L1": Lebesgue(1.0), "L2": Lebesgue(2.0), "Linf": Lebesgue(INF)}


def space_from_dict(d):
    """Parse a SpaceSpec document (strings "L1", "L2", "Linf", "Lp:3" are accepted too)."""
    if isinstance(d, str):
        if d in _ALIASES:
            return _ALIASES[d]
        if d.startswith("Lp:"):
            return Lebesgue(_inf_or(d[3:]))
        raise SpecError(f"unknown space shorthand {d!r}")
    try:
        kind = d["space"]
        if kind in ("Lp", "Lebesgue"):
            return Lebesgue(_inf_or(d["p"]))
        if kind == "Lorentz":
            return Lorentz(_inf_or(d["p"]), _inf_or(d["q"]), d.get("form", "auto"))
        if kind == "LZ":
            return LorentzZygmund(_inf_or(d["p"]), _inf_or(d["q"]), tuple(d.get("A", (0, 0))),
                                  tuple(d.get("B", (0, 0))), d.get("form", "auto"))
        if kind == "Lambda":
            return ClassicalLorentz(_inf_or(d["q"]), Weight.from_dict(d["weight"]))
        if kind == "Weighted":
            segs = tuple(Segment(s.get("source", "star"), s.get("region", "all"), Weight.from_dict(s["weight"]))
                         for s in d["segments"])
            return Weighted(_inf_or(d["q"]), segs)
        if kind == "Intersection":
            return Intersection(tuple(space_from_dict(s) for s in d["spaces"]))
        if kind == "Sum":
            return Sum(tuple(space_from_dict(s) for s in d["spaces"]))
        if kind == "OperatorInduced":
            return OperatorInduced(d["kind"], int(d["m"]), int(d["n"]), space_from_dict(d["base"]))
        if kind in ("Z1", "Z2", "Z3"):
            return Named(kind, int(d["m"]), int(d["n"]), float(d.get("alpha_inf", 0.0)))
        if kind == "Associate":
            return Associate(space_from_dict(d["base"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (SpecError, DomainError)):
            raise
        raise SpecError(f"malformed space document: {exc}") from exc
    raise SpecError(f"unknown space kind {kind!r}")


def space_to_dict(s):
    if isinstance(s, Lebesgue):
        return {"space": "Lp", "p": _enc(s.p)}
    if isinstance(s, Lorentz):
        return {"space": "Lorentz", "p": _enc(s.p), "q": _enc(s.q), "form": s.form}
    if isinstance(s, LorentzZygmund):
        return {"space": "LZ", "p": _enc(s.p), "q": _enc(s.q), "A": list(s.A), "B": list(s.B), "form": s.form}
    if isinstance(s, ClassicalLorentz):
        return {"space": "Lambda", "q": _enc(s.q), "weight": s.weight.to_dict()}
    if isinstance(s, Weighted):
        return {"space": "Weighted", "q": _enc(s.q), "segments": [g.to_dict() for g in s.segments]}
    if isinstance(s, Intersection):
        return {"space": "Intersection", "spaces": [space_to_dict(x) for x in s.spaces]}
    if isinstance(s, Sum):
        return {"space": "Sum", "spaces": [space_to_dict(x) for x in s.spaces]}
    if isinstance(s, OperatorInduced):
        return {"space": "OperatorInduced", "kind": s.kind, "m": s.m, "n": s.n, "base": space_to_dict(s.base)}
    if isinstance(s, Named):
        d = {"space": s.name, "m": s.m, "n": s.n}
        if s.name == "Z3":
            d["alpha_inf"] = s.alpha_inf
        return d
    if isinstance(s, Associate):
        return {"space": "Associate", "base": space_to_dict(s.base)}
    raise SpecError(f"cannot serialize {s!r}")
