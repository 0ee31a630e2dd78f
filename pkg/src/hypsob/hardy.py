"""Hardy-type operators P, Q, R_alpha, H_alpha and the reduction operators T_m, S_m.

Two independent evaluation routes are provided:

* literal composition in the exact ``Piecewise`` algebra (``apply_*``,
  ``apply_T``, ``compose``), and
* single-integral kernel formulas evaluated by composite Gauss-Legendre
  quadrature in the variable x = log s (``iterated_R``, ``iterated_H`` and
  ``apply_S``), which serve as the oracle for the former.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import kernels
from .errors import DivergenceError, DomainError, SpecError
from .geometry import check_alpha, check_dimension, phi
from .piecewise import Piecewise
from .quadrature import adaptive_gl, gl_rule
from .rearrangement import GridFunction, StepFunction

INF = math.inf


def derived_k_beta(m):
    """k = ceil(m/2 - 1) and beta = 1 (m odd) or 2 (m even), so that 2k + beta = m."""
    k = math.ceil(m / 2 - 1)
    beta = 1 if m % 2 else 2
    return k, beta


# -- kernels -----------------------------------------------------------------

def kernel_integral(alpha, a, b, n):
    """int_a^b phi_alpha(s) ds in closed form (array friendly)."""
    check_alpha(alpha, n)
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(a_arr < 0) or np.any(a_arr > b_arr):
        raise DomainError("kernel_integral needs 0 <= a <= b")
    if alpha == 0 and np.any(a_arr == 0):
        raise DivergenceError("int_0^b ds/s diverges")
    out = kernels.kernel_integral(float(alpha), np.atleast_1d(a_arr).ravel(),
                                  np.atleast_1d(b_arr).ravel(), int(n)).reshape(np.broadcast(a_arr, b_arr).shape)
    return float(out) if np.ndim(a) == 0 and np.ndim(b) == 0 else out


def kernel_integral_quadrature(alpha, a, b, n, rtol=1e-13):
    """Oracle for ``kernel_integral``: adaptive GL split at 1, in log variable where it helps."""
    total = 0.0
    if a < 1:
        hi = min(b, 1.0)
        g = alpha / n
        if alpha > 0:
            # s = u^(1/g): phi ds becomes du/g, removing the endpoint singularity
            total += adaptive_gl(lambda u: np.ones_like(u) / g, a ** g, hi ** g, rtol=rtol)
        else:
            total += adaptive_gl(lambda x: np.ones_like(x), math.log(a), math.log(hi), rtol=rtol)
    if b > 1:
        lo = max(a, 1.0)
        total += adaptive_gl(lambda s: 1.0 / s, lo, b, rtol=rtol)
    return total


def kernel_integral_plain(alpha, a, b, n, rtol=1e-13):
    """Second oracle: adaptive GL of phi_alpha in the original variable."""
    f = lambda s: np.where(s < 1, s ** (-1 + alpha / n), 1 / s)
    parts = []
    if a < 1:
        parts.append((a, min(b, 1.0)))
    if b > 1:
        parts.append((max(a, 1.0), b))
    # geometric subdivision tames the s^(alpha/n - 1) singularity at 0
    total = 0.0
    for lo, hi in parts:
        if lo == 0:
            pts = [0.0] + [hi * 2.0 ** (-i) for i in range(60, -1, -1)]
        else:
            pts = list(np.geomspace(lo, hi, 2 + int(abs(math.log(hi / lo)))))
        for x0, x1 in zip(pts[:-1], pts[1:]):
            total += adaptive_gl(f, x0, x1, rtol=rtol)
    return total


def Phi(alpha, t, n):
    """int_t^inf phi_alpha(s)/s ds, the kernel of H_alpha o P."""
    t = np.asarray(t, dtype=float)
    g = alpha / n
    small = n / (n - alpha) * t ** (g - 1) - alpha / (n - alpha)
    return np.where(t < 1, small, 1.0 / t)


# -- operator specifications ---------------------------------------------------

_OPS = ("P", "Q", "R", "H", "Compose", "IterR", "IterH", "T", "S")


@dataclass(frozen=True)
class OperatorSpec:
    """One of P, Q, R(alpha), H(alpha), Compose(ops), IterR(beta, alpha, j),
    IterH(alpha, j, beta), T(m), S(m) on dimension n.

    ``Compose(ops)`` means ops[0] o ops[1] o ... (the last entry acts first).
    """

    op: str
    n: int
    alpha: float = 0.0
    beta: float = 0.0
    j: int = 0
    m: int = 0
    ops: tuple = field(default=())

    def __post_init__(self):
        if self.op not in _OPS:
            raise SpecError(f"unknown operator {self.op!r}")
        check_dimension(self.n)
        if self.op in ("R", "H", "IterR", "IterH"):
            check_alpha(self.alpha, self.n)
        if self.op in ("IterR", "IterH"):
            check_alpha(self.beta, self.n)
            if int(self.j) != self.j or self.j < 0:
                raise DomainError("j must be a nonnegative integer")
        if self.op in ("T", "S"):
            check_dimension(self.n, self.m)

    @property
    def k(self):
        return derived_k_beta(self.m)[0]

    @property
    def beta_m(self):
        return derived_k_beta(self.m)[1]

    def to_dict(self):
        d = {"op": self.op, "n": self.n}
        if self.op in ("R", "H"):
            d["alpha"] = self.alpha
        elif self.op == "IterR":
            d.update(beta=self.beta, alpha=self.alpha, j=self.j)
        elif self.op == "IterH":
            d.update(alpha=self.alpha, j=self.j, beta=self.beta)
        elif self.op in ("T", "S"):
            d["m"] = self.m
        elif self.op == "Compose":
            d["ops"] = [o.to_dict() for o in self.ops]
        return d

    @classmethod
    def from_dict(cls, d, n=None):
        try:
            op = d["op"]
            n = int(d.get("n", n))
            if op == "Compose":
                ops = tuple(cls.from_dict(o, n) for o in d["ops"])
                return cls("Compose", n, ops=ops)
            if op in ("T", "S"):
                return cls(op, n, m=int(d["m"]))
            return cls(op, n, alpha=float(d.get("alpha", 0.0)), beta=float(d.get("beta", 0.0)),
                       j=int(d.get("j", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (DomainError, SpecError)):
                raise
            raise SpecError(f"malformed operator document: {exc}") from exc


# -- exact route -------------------------------------------------------------

def as_piecewise(f):
    """Convert an admissible input to the exact algebra."""
    if isinstance(f, Piecewise):
        return f
    if isinstance(f, StepFunction):
        return f.to_piecewise()
    if isinstance(f, GridFunction):
        base = f.to_step().to_piecewise()
        if f.tail["kind"] == "zero":
            return base
        if f.tail["kind"] == "powerlog" and not f.tail.get("delta", 0) and not f.tail.get("epsilon", 0):
            g = float(f.tail.get("gamma", 0.0))
            c = f.samples[-1] * f.t_max ** g
            return base + Piecewise.monomial(-g, c, lo=f.t_max)
        raise DomainError("exact operator application needs a zero or pure-power tail")
    raise DomainError(f"unsupported function type {type(f).__name__}")


def apply_P(f):
    return as_piecewise(f).cumulative().mul_monomial(-1)


def apply_Q(f):
    return as_piecewise(f).mul_monomial(-1).tail_integral()


def apply_R(alpha, f, n):
    """R_alpha f(t) = phi_alpha(t) int_0^t f."""
    check_alpha(alpha, n)
    return as_piecewise(f).cumulative().times_phi(alpha, n)


def apply_H(alpha, f, n):
    """H_alpha f(t) = int_t^inf f phi_alpha."""
    check_alpha(alpha, n)
    return as_piecewise(f).times_phi(alpha, n).tail_integral()


def HP_power(alpha, j, f, n):
    """(H_alpha o P)^j f by literal composition."""
    g = as_piecewise(f)
    for _ in range(j):
        g = apply_H(alpha, apply_P(g), n)
    return g


def R_power(alpha, j, f, n):
    g = as_piecewise(f)
    for _ in range(j):
        g = apply_R(alpha, g, n)
    return g


def H_power(alpha, j, f, n):
    g = as_piecewise(f)
    for _ in range(j):
        g = apply_H(alpha, g, n)
    return g


def apply_T(m, f, n):
    """T_m f by literal composition of the H/P stages."""
    n = check_dimension(n, m)
    k, beta = derived_k_beta(m)
    g = as_piecewise(f)
    if beta == 1:
        g = apply_H(1, g, n)
        return HP_power(2, k, g, n)
    return HP_power(2, k + 1, g, n)


def apply_S_compose(m, f, n):
    """S_m f = H_2^k o H_beta f by literal composition."""
    n = check_dimension(n, m)
    k, beta = derived_k_beta(m)
    return H_power(2, k, apply_H(beta, f, n), n)


def compose(spec, f):
    """Apply an ``OperatorSpec`` through the exact algebra."""
    n = spec.n
    if spec.op == "P":
        return apply_P(f)
    if spec.op == "Q":
        return apply_Q(f)
    if spec.op == "R":
        return apply_R(spec.alpha, f, n)
    if spec.op == "H":
        return apply_H(spec.alpha, f, n)
    if spec.op == "IterR":
        return apply_R(spec.beta, R_power(spec.alpha, spec.j, f, n), n)
    if spec.op == "IterH":
        return H_power(spec.alpha, spec.j, apply_H(spec.beta, f, n), n)
    if spec.op == "T":
        return apply_T(spec.m, f, n)
    if spec.op == "S":
        return apply_S_compose(spec.m, f, n)
    g = as_piecewise(f)
    for sub in reversed(spec.ops):
        g = compose(sub, g)
    return g


# -- single-integral kernel route ---------------------------------------------

_PANEL = 0.5      # panel width in x = log s
_ORDER = 20


def _panel_integrate(integrand, lo, hi):
    """Vectorized composite GL: sum over rows of int_lo^hi integrand(x, row) dx.

    ``lo``/``hi`` are arrays (one interval per row); each row is cut into the
    same number of panels of width <= _PANEL.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.zeros(lo.shape)
    live = hi > lo
    if not live.any():
        return out
    width = float(np.max(hi[live] - lo[live]))
    npan = max(1, int(math.ceil(width / _PANEL)))
    x, w = gl_rule(_ORDER)
    l, h = lo[live], hi[live]
    step = (h - l) / npan
    starts = l[:, None] + step[:, None] * np.arange(npan)[None, :]
    nodes = starts[:, :, None] + 0.5 * step[:, None, None] * (x[None, None, :] + 1)
    rows = np.nonzero(live)[0]
    vals = integrand(nodes, rows)
    out[live] = 0.5 * step * np.einsum("rpq,q->r", vals, w)
    return out


def _f_pieces(f):
    g = as_piecewise(f)
    return g, [(g.edges[i], g.edges[i + 1], expr) for i, expr in enumerate(g.pieces) if expr]


def _expr_at(expr, s, logs):
    out = np.zeros_like(s)
    for (p, k), c in expr.items():
        term = c * np.exp(float(p) * logs)
        if k:
            term = term * logs ** k
        out = out + term
    return out


def _kernel_int_array(alpha, a, b, n):
    """Vectorized int_a^b phi_alpha for a <= b elementwise (no validation)."""
    if alpha == 0:
        return np.log(b) - np.log(a)
    g = alpha / n
    return ((np.minimum(b, 1.0) ** g - np.minimum(a, 1.0) ** g) / g
            + np.log(np.maximum(b, 1.0)) - np.log(np.maximum(a, 1.0)))


class KernelForm:
    """Lazily evaluated single-integral formula; call with an array of t."""

    def __init__(self, evaluate, f, description):
        self._evaluate = evaluate
        self.f = f
        self.description = description

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr <= 0):
            raise DomainError("operators are evaluated at t > 0")
        out = self._evaluate(t_arr.ravel()).reshape(t_arr.shape)
        return float(out[0]) if np.ndim(t) == 0 else out

    def __repr__(self):
        return f"KernelForm({self.description})"


def iterated_H(alpha, j, beta, f, n):
    """(H_alpha^j o H_beta) f(t) = (1/j!) int_t^inf f(s) phi_beta(s) (int_t^s phi_alpha)^j ds."""
    n = check_dimension(n)
    check_alpha(alpha, n)
    check_alpha(beta, n)
    g, pieces = _f_pieces(f)
    last = g.leading(INF)
    if last is not None and g.edges[-1] == INF and float(last[1]) - 1 + beta / n >= -1:
        raise DivergenceError("tail integral of f phi_beta diverges")
    scale = 1.0 / math.factorial(j)

    def evaluate(t):
        total = np.zeros_like(t)
        logt = np.log(t)
        for a, b, expr in pieces:
            for lo_b, hi_b in ((a, min(b, 1.0)), (max(a, 1.0), b)):
                if hi_b <= lo_b:
                    continue
                lo = np.maximum(t, lo_b)
                hi = np.full_like(t, hi_b)
                if hi_b == INF:
                    # finite truncation far enough that the decaying tail is negligible
                    decay = -(float(last[1]) + beta / n - 1 + 1) if lo_b >= 1 else 1.0
                    hi = np.maximum(lo, 1.0) * math.exp(60.0 / max(decay, 1e-3))
                mask = hi > lo

                def integrand(x, rows, expr=expr):
                    s = np.exp(x)
                    tr = t[mask][rows][:, None, None]
                    val = _expr_at(expr, s, x) * s * np.where(s < 1, s ** (beta / n - 1), 1.0 / s)
                    if j:
                        val = val * _kernel_int_array(alpha, np.broadcast_to(tr, s.shape), s, n) ** j
                    return val

                if mask.any():
                    total[mask] += _panel_integrate(integrand, np.log(lo[mask]), np.log(hi[mask]))
        return scale * total

    return KernelForm(evaluate, g, f"IterH(alpha={alpha}, j={j}, beta={beta}, n={n})")


def iterated_R(beta, alpha, j, f, n):
    """(R_beta o R_alpha^j) f(t) = phi_beta(t)/j! int_0^t f(s) (int_s^t phi_alpha)^j ds."""
    n = check_dimension(n)
    check_alpha(alpha, n)
    check_alpha(beta, n)
    g, pieces = _f_pieces(f)
    first = g.leading(0)
    rate = 1.0 + float(first[1]) if first is not None else 1.0
    if rate <= 0:
        raise DivergenceError("f is not integrable near 0")
    scale = 1.0 / math.factorial(j)
    # below exp(-depth) relative to t the integrand mass is < e^-40
    depth = 40.0 / min(rate, 1.0)

    def evaluate(t):
        total = np.zeros_like(t)
        for a, b, expr in pieces:
            for lo_b, hi_b in ((a, min(b, 1.0)), (max(a, 1.0), b)):
                if hi_b <= lo_b:
                    continue
                hi = np.minimum(t, hi_b)
                lo = np.full_like(t, lo_b)
                if lo_b == 0:
                    lo = hi * math.exp(-depth)
                mask = hi > lo

                def integrand(x, rows, expr=expr):
                    s = np.exp(x)
                    tr = t[mask][rows][:, None, None]
                    val = _expr_at(expr, s, x) * s
                    if j:
                        val = val * _kernel_int_array(alpha, s, np.broadcast_to(tr, s.shape), n) ** j
                    return val

                if mask.any():
                    total[mask] += _panel_integrate(integrand, np.log(lo[mask]), np.log(hi[mask]))
        return scale * phi(beta, t, n) * total

    return KernelForm(evaluate, g, f"IterR(beta={beta}, alpha={alpha}, j={j}, n={n})")


def apply_S(m, f, n):
    """S_m f through the single-integral kernel formula (see ``iterated_H``)."""
    n = check_dimension(n, m)
    k, beta = derived_k_beta(m)
    return iterated_H(2, k, beta, f, n)


def HP_fubini(alpha, f, n):
    """(H_alpha o P) f(t) = Phi(t) int_0^t f + int_t^inf f Phi, by quadrature (oracle)."""
    g = as_piecewise(f)
    pieces = [(g.edges[i], g.edges[i + 1], e) for i, e in enumerate(g.pieces) if e]
    if g.edges[-1] == INF and g.pieces[-1]:
        raise DomainError("the Fubini oracle needs a compactly supported input")
    G = g.cumulative()

    def one(t):
        tail = 0.0
        for a, b, expr in pieces:
            lo = max(a, t)
            if b <= lo:
                continue
            for x0, x1 in ((lo, min(b, 1.0)), (max(lo, 1.0), b)):
                if x1 > x0:
                    tail += adaptive_gl(lambda x, e=expr: np.exp(x) * _expr_at(e, np.exp(x), x) * Phi(alpha, np.exp(x), n),
                                        math.log(x0), math.log(x1), rtol=1e-14)
        return float(Phi(alpha, t, n)) * G(t) + tail

    return KernelForm(lambda t: np.array([one(x) for x in t]), g, f"HP_fubini(alpha={alpha})")


# -- identities and checks -------------------------------------------------------

def _integral_product(f, g):
    return (as_piecewise(f) * as_piecewise(g)).integral()


def adjointness_gap(alpha, f, g, n):
    """(int f R_alpha g, int (H_alpha f) g), both exact."""
    return _integral_product(f, apply_R(alpha, g, n)), _integral_product(apply_H(alpha, f, n), g)


def duality_ratio(alpha, j, f, g, n):
    """[int f (H_alpha P)^j g] / [int (H_alpha P)^j f g] and the admissible bracket."""
    num = _integral_product(f, HP_power(alpha, j, g, n))
    den = _integral_product(HP_power(alpha, j, f, n), g)
    lo = ((n - alpha) / n) ** j
    return num / den, (lo, 1.0 / lo)


@dataclass
class SandwichReport:
    alpha: float
    j: int
    n: int
    lower_constant: float   # sup of (H^{j+1} P f + R^{j+1} f) / (H P)^{j+1} f
    upper_constant: float   # sup of (H P)^{j+1} f(t) / (H^{j+1} P f(t/2^j) + R^{j+1} f(2^j t))
    points: int

    @property
    def finite(self):
        return math.isfinite(self.lower_constant) and math.isfinite(self.upper_constant)

    def to_dict(self):
        return dict(alpha=self.alpha, j=self.j, n=self.n, lower_constant=self.lower_constant,
                    upper_constant=self.upper_constant, points=self.points)


def sandwich_check(alpha, j, f, n, grid):
    """Empirical constants in the two-sided estimate for (H_alpha o P)^(j+1) f."""
    check_alpha(alpha, n)
    grid = np.asarray(grid, dtype=float)
    g = as_piecewise(f)
    if g.is_zero():
        return SandwichReport(alpha, j, n, 0.0, 0.0, grid.size)
    mid = HP_power(alpha, j + 1, g, n)
    hpf = H_power(alpha, j + 1, apply_P(g), n)
    rf = R_power(alpha, j + 1, g, n)
    c = 2.0 ** j
    m_vals = mid(grid)
    low = (hpf(grid) + rf(grid)) / m_vals
    up = m_vals / (hpf(grid / c) + rf(grid * c))
    return SandwichReport(alpha, j, n, float(np.max(low)), float(np.max(up)), grid.size)
