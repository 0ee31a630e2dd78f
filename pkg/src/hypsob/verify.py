"""End-to-end checks of the reduction to one-dimensional inequalities.

Radial test functions are built from the exact sinh kernels

    H1~ f(t) = int_t^inf f(s) sinh(rho(s))^(1-n) ds
    H2~ f(t) = int_t^inf f(s) s sinh(rho(s))^(2-2n) ds

composed as T~_m = (H2~ P)^k H1~ (m odd) or (H2~ P)^(k+1) (m even).  Each
stage is tabulated on Chebyshev panels in x = log t and integrated
spectrally, which keeps the profile accurate enough for finite differences.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os

import numpy as np
from numpy.polynomial import chebyshev as C

from . import hardy
from .errors import DomainError, ResolutionError, RestrictedScopeError, SpecError
from .families import indicator_witnesses, random_steps
from .geometry import ball_volume, check_dimension, inverse_volume, sphere_area
from .hardy import derived_k_beta
from .norms import (INF, Lebesgue, LorentzZygmund, Named, Segment, Weight, Weighted, norm, space_to_dict)
from .piecewise import Piecewise
from .quadrature import adaptive_gl, gl_rule
from .rearrangement import StepFunction
from .targets import existence_condition, nonexistence_certificate

X_LO, X_HI = -40.0, 50.0     # tabulation range in x = log t
_DEG = 24
_U = C.chebpts1(_DEG + 1)
_VINV = np.linalg.inv(C.chebvander(_U, _DEG))
_VINT = C.chebvander(_U, _DEG + 1)


def threads():
    """Worker count from HYPSOB_THREADS (default 1: serial)."""
    try:
        return max(1, int(os.environ.get("HYPSOB_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    w = threads()
    if w == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items))


# -- admissible inputs ------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibleFunction:
    """A bounded nonnegative function with compact support [a, b] and known breaks."""

    fn: object
    support: tuple
    breaks: tuple = ()
    label: str = "callable"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.support
        inside = (t > a) & (t < b)
        out = np.where(inside, self.fn(np.where(inside, t, 0.5 * (a + b))), 0.0)
        return out


def smooth_bump(a=1.0, b=2.0, height=1.0):
    """height * exp(1 - 1/(1 - y^2)), y the affine image of t in (-1, 1)."""
    mid, half = 0.5 * (a + b), 0.5 * (b - a)

    def fn(t):
        y = (t - mid) / half
        return height * np.exp(1.0 - 1.0 / np.maximum(1.0 - y * y, 1e-300))

    return AdmissibleFunction(fn, (float(a), float(b)), (), f"bump({a},{b})")


def _support_and_breaks(f):
    if isinstance(f, StepFunction):
        if f.is_zero():
            return None, ()
        b = np.concatenate([[0.0], f.breakpoints])
        first = int(np.nonzero(f.values)[0][0])
        return (float(b[first]), f.support_end), tuple(f.breakpoints.tolist())
    if isinstance(f, AdmissibleFunction):
        return f.support, tuple(f.breaks) + tuple(f.support)
    if isinstance(f, Piecewise):
        if f.is_zero():
            return None, ()
        end = f.support_end
        if not math.isfinite(end):
            raise DomainError("admissible functions have compact support")
        return (0.0, end), tuple(float(e) for e in f.breaks if 0 < e < INF)
    raise DomainError(f"unsupported input {type(f).__name__}")


def check_admissible(f, allow_origin=False):
    """Bounded, nonnegative, compactly supported (inside (0, inf) unless allow_origin)."""
    support, breaks = _support_and_breaks(f)
    if support is None:
        return support, breaks
    a, b = support
    if not allow_origin and not a > 0:
        raise DomainError("support must lie inside (0, inf)")
    probe = np.geomspace(max(a, 1e-12), b, 2001)[1:-1]
    vals = np.asarray(f(probe), dtype=float)
    if np.any(vals < 0) or not np.all(np.isfinite(vals)):
        raise DomainError("admissible functions are nonnegative and bounded")
    return support, breaks


# -- spectral panels -------------------------------------------------------------------

class _Panels:
    """Chebyshev panels in x = log t with fine panels over [fine_lo, fine_hi]."""

    def __init__(self, cuts, fine=None, width=0.25, fine_width=0.02):
        edges = set(np.arange(X_LO, X_HI + 1e-12, width).tolist())
        if fine is not None:
            lo, hi = fine
            edges.update(np.arange(lo, hi, fine_width).tolist())
        edges.update(c for c in cuts if X_LO < c < X_HI)
        e = np.array(sorted(edges))
        e = e[np.concatenate([[True], np.diff(e) > 1e-9])]
        self.edges = e
        self.mid = 0.5 * (e[1:] + e[:-1])
        self.hw = 0.5 * (e[1:] - e[:-1])
        self.x = self.mid[:, None] + self.hw[:, None] * _U[None, :]
        self.t = np.exp(self.x)

    def locate(self, x):
        i = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.mid.size - 1)
        return i, (x - self.mid[i]) / self.hw[i]


def _antiderivative(panels, y):
    """Per-panel Chebyshev antiderivative (vanishing at the left edge) of y(x) sampled at nodes."""
    coef = y @ _VINV.T
    return C.chebint(coef, lbnd=-1, axis=1)


def _h_stage(panels, g, kernel):
    """Values at nodes of int_t^inf g(s) kernel(s) ds, plus the data for evaluation anywhere."""
    y = g * kernel * panels.t
    F = _antiderivative(panels, y)
    full = F.sum(axis=1) * panels.hw            # T_k(1) = 1
    beyond = float(y[-1, -1])                     # integrand ~ s^-2 beyond the grid
    after = np.concatenate([np.cumsum(full[::-1])[::-1][1:], [0.0]]) + beyond
    at_nodes = (full[:, None] - (F @ _VINT.T) * panels.hw[:, None]) + after[:, None]
    return at_nodes, (F, full, after, beyond)


def _p_stage(panels, g):
    """Values at nodes of (1/t) int_0^t g."""
    y = g * panels.t
    F = _antiderivative(panels, y)
    full = F.sum(axis=1) * panels.hw
    below = float(y[0, 0])                        # g is constant below the grid
    before = np.concatenate([[0.0], np.cumsum(full)[:-1]]) + below
    return ((F @ _VINT.T) * panels.hw[:, None] + before[:, None]) / panels.t


def _kernels(panels, n):
    r = inverse_volume(panels.t.ravel(), n).reshape(panels.t.shape)
    sh = np.sinh(r)
    k1 = sh ** (1 - n)
    return k1, panels.t * k1 * k1


@dataclass
class RadialProfile:
    """T~_m f as a function of the volume variable t (u_f(x) = profile(V(d(x))))."""

    n: int
    m: int
    breaks: tuple
    _panels: object = field(repr=False, default=None)
    _data: object = field(repr=False, default=None)
    zero: bool = False

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if self.zero:
            out = np.zeros_like(t_arr)
            return float(out[0]) if np.ndim(t) == 0 else out
        F, full, after, beyond = self._data
        p = self._panels
        x = np.log(np.maximum(t_arr, 1e-300))
        xc = np.clip(x, p.edges[0], p.edges[-1])
        i, u = p.locate(xc)
        # chebval row by row
        Fu = np.array([C.chebval(uu, F[ii]) for ii, uu in zip(i, u)])
        out = (full[i] - Fu * p.hw[i]) + after[i]
        hi = x > p.edges[-1]
        if np.any(hi):
            out[hi] = beyond * math.exp(p.edges[-1]) / t_arr[hi]
        return float(out[0]) if np.ndim(t) == 0 else out


def build_profile(m, f, n, allow_origin=False):
    """RadialProfile of T~_m f with the exact sinh kernels."""
    n = check_dimension(n, m)
    support, breaks = check_admissible(f, allow_origin)
    if support is None:
        return RadialProfile(n, m, (), zero=True)
    cuts = [math.log(b) for b in breaks if b > 0]
    a, b = support
    fine = (math.log(a) if a > 0 else math.log(b) - 3.0, math.log(b))
    panels = _Panels(cuts, fine)
    k1, k2 = _kernels(panels, n)
    k, beta = derived_k_beta(m)
    g = np.asarray(f(panels.t.ravel()), dtype=float).reshape(panels.t.shape)
    stages = [("H", k1)] if beta == 1 else [("P", None), ("H", k2)]
    stages += [("P", None), ("H", k2)] * k
    data = None
    for kind, ker in stages:
        if kind == "P":
            g = _p_stage(panels, g)
        else:
            g, data = _h_stage(panels, g, ker)
    return RadialProfile(n, m, tuple(breaks), panels, data)


def profile_ratio_bounds(m, f, n, t=None):
    """[min, max] of T~_m f / T_m f over a grid where T_m f > 0."""
    prof = build_profile(m, f, n, allow_origin=True)
    if t is None:
        t = np.geomspace(1e-6, 1e6, 241)
    exact = hardy.apply_T(m, f, n)(t)
    approx = prof(t)
    ok = exact > 0
    r = approx[ok] / exact[ok]
    return float(r.min()), float(r.max())


# -- Laplace-Beltrami in the Poincare ball ------------------------------------------------

def distance_grid(d_lo, d_hi, size):
    """Poincare radii r = tanh(d/2) for d uniform in [d_lo, d_hi] (graded towards r = 1)."""
    d = np.linspace(d_lo, d_hi, size)
    return np.tanh(0.5 * d)


def _radial_operator(n, r, w1, w2):
    s = 0.5 * (1.0 - r * r)
    return s * s * (w2 + (n - 1) / r * w1) + (n - 2) * s * r * w1


def _check_grid(r):
    r = np.asarray(r, dtype=float)
    if r.size < 3 or np.any(r <= 0) or np.any(r >= 1):
        raise ResolutionError("need at least 3 radii inside (0, 1)")
    if np.any(1.0 - r < 1e-6):
        raise ResolutionError("grid reaches r -> 1 beyond the finite-difference resolution (1 - r < 1e-6)")
    return r


def radial_laplacian(profile, r, rel_step=1e-4):
    """Laplace-Beltrami of x -> profile(V(2 artanh |x|)) at radii r (central differences)."""
    r = _check_grid(r)
    n = profile.n
    h = rel_step * np.minimum(r, 1.0 - r)

    def w(rr):
        return profile(ball_volume(2.0 * np.arctanh(rr), n))

    w0, wp, wm = w(r), w(r + h), w(r - h)
    return _radial_operator(n, r, (wp - wm) / (2 * h), (wp - 2 * w0 + wm) / (h * h))


def _mass(f, v):
    """int_0^v f for step, piecewise or admissible callables."""
    v = np.atleast_1d(v)
    if isinstance(f, (StepFunction, Piecewise)):
        return hardy.as_piecewise(f).cumulative()(v)
    a, b = f.support
    out = []
    for vv in v:
        hi = min(vv, b)
        out.append(adaptive_gl(f, a, hi, rtol=1e-13) if hi > a else 0.0)
    return np.array(out)


def laplacian_oracle(f, n, r, rel_step=1e-4):
    """Laplacian from the closed-form first derivative, differentiated numerically once."""
    r = _check_grid(r)
    n = check_dimension(n)
    c = sphere_area(n)
    h = rel_step * np.minimum(r, 1.0 - r)

    def w1(rr):
        d = 2.0 * np.arctanh(rr)
        return -c * _mass(f, ball_volume(d, n)) * np.sinh(d) ** (1 - n) * 2.0 / (1.0 - rr * rr)

    return _radial_operator(n, r, w1(r), (w1(r + h) - w1(r - h)) / (2 * h))


def laplacian_target(f, n, r):
    """-(n omega_n)^2 f(V(2 artanh r))."""
    n = check_dimension(n)
    r = np.asarray(r, dtype=float)
    return -sphere_area(n) ** 2 * np.asarray(f(ball_volume(2.0 * np.arctanh(r), n)), dtype=float)


# -- measure-preserving pullback ---------------------------------------------------------

def shell_volume(r0, r1, n):
    """Hyperbolic volume of {r0 < d(x) <= r1} by quadrature of n omega_n sinh^(n-1)."""
    if r1 <= r0:
        return 0.0
    c = sphere_area(n)
    return adaptive_gl(lambda r: c * np.sinh(r) ** (n - 1), r0, r1, rtol=1e-14)


def pullback_rearrangement(f, n):
    """(f o V o d)* on (0, inf) from level sets measured in the hyperbolic radius."""
    if not isinstance(f, StepFunction):
        raise RestrictedScopeError("pullback rearrangement is implemented for step functions")
    if f.is_zero():
        return StepFunction.zero()
    b = np.concatenate([[0.0], f.breakpoints])
    radii = inverse_volume(b, n)
    lengths = np.array([shell_volume(radii[i], radii[i + 1], n) for i in range(f.values.size)])
    order = np.argsort(-f.values, kind="stable")
    vals = f.values[order]
    ends = np.cumsum(lengths[order])
    return StepFunction(ends, vals)


def gradient_norm_identity(m, X, f, n):
    """(c ||f o V o d||_X(H^n), c ||f||_X(0,inf)) with c = (n omega_n)^ceil(m/2)."""
    n = check_dimension(n, m)
    c = sphere_area(n) ** math.ceil(m / 2)
    if isinstance(f, StepFunction) and f.is_zero():
        return 0.0, 0.0
    if isinstance(f, StepFunction):
        lhs = norm(X, pullback_rearrangement(f, n)).value
    elif isinstance(X, Lebesgue) and X.p < INF:
        return c * _lebesgue_pullback(f, X.p, n), c * _lebesgue_direct(f, X.p)
    else:
        raise RestrictedScopeError("pullback of non-step functions is implemented for L^p, p < inf")
    return c * lhs, c * norm(X, f).value


def _lebesgue_direct(f, p):
    support, breaks = check_admissible(f, allow_origin=True)
    if support is None:
        return 0.0
    pts = sorted(set([support[0], support[1]] + [b for b in breaks if support[0] < b < support[1]]))
    total = sum(adaptive_gl(lambda t: np.abs(f(t)) ** p, a, b, rtol=1e-13) for a, b in zip(pts[:-1], pts[1:]))
    return total ** (1.0 / p)


def _lebesgue_pullback(f, p, n):
    support, breaks = check_admissible(f, allow_origin=True)
    if support is None:
        return 0.0
    pts = sorted(set([support[0], support[1]] + list(breaks)))
    radii = inverse_volume(np.array(pts), n)
    c = sphere_area(n)
    total = 0.0
    for r0, r1 in zip(radii[:-1], radii[1:]):
        total += adaptive_gl(lambda r: np.abs(f(ball_volume(r, n))) ** p * c * np.sinh(r) ** (n - 1),
                             r0, r1, rtol=1e-13)
    return total ** (1.0 / p)


# -- Polya-Szego in the radial case -------------------------------------------------------

@dataclass(frozen=True)
class CallableProfile:
    """A profile of the volume variable given by a vectorized callable."""

    fn: object
    n: int
    breaks: tuple = ()
    end: float = None     # profile constant beyond this point (None: unknown)

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))


def _one_sided(fn, z, h, side):
    """Second-order one-sided difference at z (side=1: from the right, -1: from the left)."""
    z = float(z)
    v = fn(np.array([z, z + side * h, z + 2 * side * h]))
    return float(side * (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h))


def _derivative(fn, z, rel=1e-6):
    h = rel * np.maximum(np.abs(z), 1e-3)
    return (fn(z + h) - fn(z - h)) / (2 * h)


def _segments(lo, hi, cuts, width):
    pts = sorted(set([lo, hi] + [c for c in cuts if lo < c < hi]))
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        k = max(1, int(math.ceil((b - a) / width)))
        e = np.linspace(a, b, k + 1)
        out.extend(zip(e[:-1], e[1:]))
    return out


def _lp(vals_weights, p):
    vals, w = vals_weights
    if p == INF:
        return float(np.max(vals)) if vals.size else 0.0
    return float(np.dot(w, vals ** p) ** (1.0 / p))


def polya_szego_radial_check(profile, X, order=20):
    """Both sides of the radial Polya-Szego comparison for a nonincreasing profile.

    lhs = n omega_n || -u'(t) sinh(rho(t))^(n-1) ||_X(0,inf), evaluated in t;
    rhs = || grad u ||_X(H^n) for u(x) = profile(V(d(x))), evaluated in the
    hyperbolic radius with the measure n omega_n sinh^(n-1)(r) dr.
    """
    if not isinstance(X, Lebesgue):
        raise RestrictedScopeError("the radial comparison is implemented for Lebesgue norms")
    n = check_dimension(profile.n)
    c = sphere_area(n)
    p = X.p
    end = getattr(profile, "end", None)
    t_hi = end if end else math.exp(X_HI)
    cuts_t = [b for b in profile.breaks if b > 0] + ([end] if end else [])
    xg, wg = gl_rule(order)

    # lhs in x = log t
    vals, ws = [], []
    for a, b in _segments(X_LO, math.log(t_hi), [math.log(v) for v in cuts_t], 0.25):
        hw, mid = 0.5 * (b - a), 0.5 * (b + a)
        x = mid + hw * xg
        t = np.exp(x)
        d = _derivative(profile, t)
        w = hw * wg * t
        if p == INF:
            ta, tb = math.exp(a), math.exp(b)
            t = np.concatenate([t, [ta, tb]])
            d = np.concatenate([d, [_one_sided(profile, ta, 1e-6 * ta, 1), _one_sided(profile, tb, 1e-6 * tb, -1)]])
            w = np.concatenate([w, [0.0, 0.0]])
        vals.append(c * np.abs(d) * np.sinh(inverse_volume(t, n)) ** (n - 1))
        ws.append(w)
    lhs = _lp((np.concatenate(vals), np.concatenate(ws)), p)

    # rhs in r
    r_hi = float(inverse_volume(t_hi, n))
    cuts_r = [float(inverse_volume(v, n)) for v in cuts_t]

    def u(r):
        return profile(ball_volume(np.maximum(r, 0.0), n))

    vals, ws = [], []
    for a, b in _segments(0.0, r_hi, cuts_r, 0.05):
        hw, mid = 0.5 * (b - a), 0.5 * (b + a)
        r = mid + hw * xg
        rel = 1e-7 * min(1.0, hw)
        d = (u(r + rel) - u(r - rel)) / (2 * rel)
        w = hw * wg * c * np.sinh(r) ** (n - 1)
        if p == INF:
            r = np.concatenate([r, [a, b]])
            d = np.concatenate([d, [_one_sided(u, a, rel, 1), _one_sided(u, b, rel, -1)]])
            w = np.concatenate([w, [0.0, 0.0]])
        vals.append(np.abs(d))
        ws.append(w)
    rhs = _lp((np.concatenate(vals), np.concatenate(ws)), p)

    probe = np.geomspace(1e-8, min(t_hi, 1e8), 4001)
    pv = profile(probe)
    scale = max(float(np.max(np.abs(pv))), 1e-300)
    if np.any(np.diff(pv) > 1e-12 * scale):
        raise RestrictedScopeError("profile is not nonincreasing; equality is not asserted",
                                   details={"lhs": lhs, "rhs": rhs, "lhs_le_rhs": bool(lhs <= rhs * (1 + 1e-9))})
    return lhs, rhs


# -- reduction-principle suites ------------------------------------------------------------

@dataclass
class SobolevCase:
    case: str
    m: int
    n: int
    X: object
    Y: object
    which: str
    family_size: int
    constant: float
    half_constant: float
    refinement_delta: float
    witnesses: list
    passed: bool
    parameters: dict = field(default_factory=dict)

    def to_dict(self):
        params = {"m": self.m, "n": self.n, "which": self.which,
                  "X": space_to_dict(self.X), "Y": space_to_dict(self.Y)}
        params.update(self.parameters)
        return {"case": self.case, "parameters": params, "family_size": self.family_size,
                "empirical_constant": self.constant, "refinement_delta": self.refinement_delta,
                "witnesses": self.witnesses, "pass": self.passed}


def _apply(which, m, f, n):
    if which == "T":
        return hardy.apply_T(m, f, n)
    if which == "S":
        return hardy.apply_S_compose(m, f, n)
    raise SpecError("which must be 'T' or 'S'")


def reduction_ratio(m, X, Y, f, n, which="T"):
    """||op f||_Y / ||f||_X, with the convention 0 for f = 0 (nan when f is not in X)."""
    nx = norm(X, f).value
    if nx == 0:
        return 0.0
    if not math.isfinite(nx):
        return float("nan")
    return norm(Y, _apply(which, m, f, n)).value / nx


def _describe(f):
    return f.to_dict() if hasattr(f, "to_dict") else repr(f)


def reduction_ratio_suite(m, X, Y, family, n, which="T", refined=None, tol=0.1, case="reduction"):
    """Empirical sup of ||op f||_Y / ||f||_X over a family, with a refinement check.

    ``refined`` is a larger family containing ``family`` (typically twice as
    many random members).  Without it the first half of ``family`` is taken
    as the coarse family and ``family`` itself as the refined one.
    """
    n = check_dimension(n, m)
    if refined is None:
        coarse, fine = list(family[: max(1, (len(family) + 1) // 2)]), list(family)
    else:
        coarse, fine = list(family), list(refined)
    ratios_fine = _map(lambda f: reduction_ratio(m, X, Y, f, n, which), fine)
    lookup = {id(f): r for f, r in zip(fine, ratios_fine)}
    ratios_coarse = [lookup[id(f)] if id(f) in lookup else reduction_ratio(m, X, Y, f, n, which) for f in coarse]
    fin = [r for r in ratios_fine if not math.isnan(r)]
    cin = [r for r in ratios_coarse if not math.isnan(r)]
    const = max(fin) if fin else 0.0
    half = max(cin) if cin else 0.0
    delta = abs(const - half) / const if const > 0 and math.isfinite(const) else (0.0 if const == 0 else INF)
    top = sorted(range(len(fine)), key=lambda i: -(ratios_fine[i] if not math.isnan(ratios_fine[i]) else -1))[:3]
    witnesses = [{"index": i, "ratio": ratios_fine[i], "function": _describe(fine[i])} for i in top]
    passed = bool(math.isfinite(const) and delta < tol)
    return SobolevCase(case, m, n, X, Y, which, len(fine), const, half, delta, witnesses, passed)


def witness_growth(m, X, Y, n, which="T", direction="shrinking", js=(1, 10, 100, 1000, 10000)):
    """Ratios along chi_(0,1/j) ("shrinking") or chi_(0,j) ("growing")."""
    if direction not in ("shrinking", "growing"):
        raise SpecError("direction must be 'shrinking' or 'growing'")
    fs = [StepFunction.indicator(1.0 / j if direction == "shrinking" else float(j)) for j in js]
    ratios = [reduction_ratio(m, X, Y, f, n, which) for f in fs]
    grows = all(b > a for a, b in zip(ratios, ratios[1:]))
    return {"direction": direction, "j": list(js), "ratios": ratios, "increasing": bool(grows),
            "growth": ratios[-1] / ratios[0] if ratios[0] > 0 else INF}


FINE_SIZES = tuple(10.0 ** (j / 8) for j in range(-24, 25))


def standard_family(size, seed, extra=()):
    """Random nonincreasing steps, indicators chi_(0,a) at eighth-decade sizes, extra members."""
    return random_steps(size, seed) + indicator_witnesses(FINE_SIZES) + list(extra)


def family_pair(size, seed, extra=()):
    """(family, doubled family); the random part of the first is a prefix of the second."""
    return standard_family(size, seed, extra), standard_family(2 * size, seed, extra)


# -- limiting inequalities ----------------------------------------------------------------

LIMITING_CASES = ("m-odd-L1", "m-even-L1", "critical-n/m", "Linf-LZ")


def limiting_spaces(case, n, m, alpha_inf=None):
    """(X, Y) for one of the limiting displays."""
    n = check_dimension(n, m)
    if case == "m-odd-L1":
        if m % 2 == 0 or m < 3:
            raise DomainError("the odd L^1 display needs m >= 3 odd")
        return Lebesgue(1.0), Named("Z1", m, n)
    if case == "m-even-L1":
        if m % 2:
            raise DomainError("the even L^1 display needs m even")
        return Lebesgue(1.0), Named("Z2", m, n)
    if case == "critical-n/m":
        q = n / m
        Y = Weighted(q, (Segment("dstar", "lower", Weight(lower=(-m / n, -1.0, 0.0))),
                         Segment("dstar", "upper", Weight())))
        return Lebesgue(q), Y
    if case == "Linf-LZ":
        if alpha_inf is None:
            raise DomainError("the supercritical display needs alpha_inf")
        X = LorentzZygmund(INF, INF, (0.0, float(alpha_inf)))
        if alpha_inf <= math.ceil(m / 2):
            ok, witness = existence_condition(m, X)
            raise DomainError(f"alpha_inf = {alpha_inf} <= ceil(m/2): no optimal target exists",
                              details={"existence_condition": ok, "witness": witness,
                                       "divergence": nonexistence_certificate(m, X, n)})
        return X, Named("Z3", m, n, float(alpha_inf))
    raise DomainError(f"unknown limiting case {case!r}")


def limiting_inequalities_check(case, n, m, family, alpha_inf=None, refined=None, tol=0.1):
    """Empirical constant of ||S_m f||_Y / ||f||_X for a limiting display."""
    X, Y = limiting_spaces(case, n, m, alpha_inf)
    res = reduction_ratio_suite(m, X, Y, family, n, "S", refined, tol, case=case)
    if alpha_inf is not None:
        res.parameters["alpha_inf"] = alpha_inf
    return res


def potential_estimate_check(f, n, t):
    """(u*(t), int_t^inf s (-Lap u)**(s) / (n omega_n sinh(rho(s))^(n-1))^2 ds) for u = w_f.

    f must be nonincreasing; then (-Lap u)* = (n omega_n)^2 f and the right
    side is computed from the exact P f with the sinh kernel by quadrature.
    """
    if not (isinstance(f, StepFunction) and f.is_nonincreasing()):
        raise RestrictedScopeError("the potential estimate check needs a nonincreasing step function")
    n = check_dimension(n)
    prof = build_profile(2, f, n, allow_origin=True)
    Pf = hardy.apply_P(f)
    c = sphere_area(n)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    cuts = [math.log(b) for b in f.breakpoints]

    def integrand(x):
        s = np.exp(x)
        return s * c * c * Pf(s) / (c * np.sinh(inverse_volume(s, n)) ** (n - 1)) ** 2 * s

    rhs = []
    for tt in t:
        pts = [math.log(tt)] + [x for x in cuts if x > math.log(tt)] + [X_HI]
        rhs.append(sum(adaptive_gl(integrand, a, b, rtol=1e-12) for a, b in zip(pts[:-1], pts[1:])))
    return prof(t), np.array(rhs)
