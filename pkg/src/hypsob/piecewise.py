"""Exact algebra of piecewise power-log functions on (0, inf).

A ``Piecewise`` equals, on each piece (e_i, e_{i+1}], a finite sum of terms
c * t**p * log(t)**k with rational p and integer k >= 0, and vanishes beyond
its last edge.  The class is closed under multiplication by the kernels
phi_alpha, under integration from 0 and to infinity, and under products, so
step functions pushed through any composition of P, Q, R_alpha, H_alpha stay
exact up to floating point rounding of the coefficients.
"""
import math
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DivergenceError

INF = math.inf


def as_fraction(x):
    """Exact rational for an exponent; short decimals like 0.1 map to 1/10."""
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    f = Fraction(x).limit_denominator(10**9)
    return f if float(f) == x else Fraction(x)


def _clean(expr):
    return {key: c for key, c in expr.items() if c != 0.0}


def _add_into(acc, expr, scale=1.0):
    for key, c in expr.items():
        acc[key] = acc.get(key, 0.0) + scale * c


def expr_mul(a, b):
    out = {}
    for (p1, k1), c1 in a.items():
        for (p2, k2), c2 in b.items():
            key = (p1 + p2, k1 + k2)
            out[key] = out.get(key, 0.0) + c1 * c2
    return _clean(out)


def expr_shift(expr, p, c=1.0, k=0):
    """Multiply every term by c t^p log(t)^k."""
    return {(q + p, j + k): c * v for (q, j), v in expr.items()} if c != 0.0 else {}


def antiderivative(expr):
    """Term-wise antiderivative of a power-log expression."""
    out = {}
    for (p, k), c in expr.items():
        if p == -1:
            key = (Fraction(0), k + 1)
            out[key] = out.get(key, 0.0) + c / (k + 1)
            continue
        q = p + 1
        qf = float(q)
        coef = c
        # t^q sum_i (-1)^i k!/(k-i)! log^(k-i) t / q^(i+1)
        for i in range(k + 1):
            key = (q, k - i)
            out[key] = out.get(key, 0.0) + coef / qf
            coef = -coef * (k - i) / qf
    return _clean(out)


def term_limit(p, k, at):
    """Limit of t^p log(t)^k at 0 or inf: returns value or +-inf marker."""
    if at == 0:
        if p > 0:
            return 0.0
        if p == 0 and k == 0:
            return 1.0
        return INF if (p < 0 or k % 2 == 0) else -INF
    if p < 0:
        return 0.0
    if p == 0 and k == 0:
        return 1.0
    return INF


def expr_eval(expr, x):
    """Evaluate at a scalar x, allowing x = 0 or inf through limits."""
    if x == 0 or x == INF:
        at = 0 if x == 0 else INF
        total = 0.0
        bad = []
        for (p, k), c in expr.items():
            lim = term_limit(p, k, at)
            if math.isinf(lim):
                bad.append((p, k))
            else:
                total += c * lim
        if bad:
            raise DivergenceError(f"power-log terms {bad} diverge at t={'0' if at == 0 else 'inf'}")
        return total
    lx = math.log(x)
    return sum(c * x ** float(p) * (lx ** k if k else 1.0) for (p, k), c in expr.items())


class Piecewise:
    """Piecewise power-log function; see module docstring."""

    __slots__ = ("edges", "pieces", "_compiled")

    def __init__(self, edges, pieces):
        edges = tuple(float(e) for e in edges)
        if len(edges) != len(pieces) + 1 or edges[0] != 0.0:
            raise ValueError("edges must start at 0 and bound every piece")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("edges must be strictly increasing")
        self.edges = edges
        self.pieces = tuple(_clean(dict(p)) for p in pieces)
        self._compiled = None

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls):
        return cls((0.0, INF), [{}])

    @classmethod
    def from_step(cls, breakpoints, values):
        edges = (0.0,) + tuple(float(b) for b in breakpoints)
        pieces = [{(Fraction(0), 0): float(v)} for v in values]
        return cls(edges, pieces)

    @classmethod
    def monomial(cls, p, c=1.0, k=0, lo=0.0, hi=INF):
        """c t^p log^k t on (lo, hi], zero elsewhere."""
        expr = {(as_fraction(p), k): float(c)}
        if lo > 0:
            return cls((0.0, lo, hi), [{}, expr])
        return cls((0.0, hi), [expr])

    # evaluation -------------------------------------------------------
    def _compile(self):
        if self._compiled is None:
            ptr = [0]
            ps, ks, cs = [], [], []
            for expr in self.pieces:
                for (p, k), c in expr.items():
                    ps.append(float(p))
                    ks.append(k)
                    cs.append(c)
                ptr.append(len(ps))
            self._compiled = (
                np.array(self.edges, dtype=float),
                np.array(ptr, dtype=np.int_),
                np.array(ps, dtype=float),
                np.array(ks, dtype=np.int_),
                np.array(cs, dtype=float),
            )
        return self._compiled

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = kernels.powerlog_eval(np.atleast_1d(t_arr).ravel(), *self._compile())
        out = out.reshape(t_arr.shape)
        return float(out) if np.ndim(t) == 0 else out

    @property
    def support_end(self):
        """Right end of the support (inf when the last piece is unbounded and nonzero)."""
        for i in range(len(self.pieces) - 1, -1, -1):
            if self.pieces[i]:
                return self.edges[i + 1]
        return 0.0

    def is_zero(self):
        return all(not p for p in self.pieces)

    @property
    def breaks(self):
        """Interior edges (excluding 0 and inf)."""
        return np.array([e for e in self.edges[1:] if e != INF])

    def leading(self, at):
        """Dominant term (c, p, k) of the first piece at 0 or of the last piece at inf.

        At 0 the coefficient is returned with respect to |log t|^k.  Returns
        None when the function vanishes identically near that end.
        """
        if at == 0:
            expr = self._significant(self.pieces[0])
            if not expr:
                return None
            p = min(q for q, _ in expr)
            k = max(j for q, j in expr if q == p)
            return expr[(p, k)] * (-1) ** k, p, k
        if self.edges[-1] != INF or not self.pieces[-1]:
            return None
        expr = self._significant(self.pieces[-1])
        p = max(q for q, _ in expr)
        k = max(j for q, j in expr if q == p)
        return expr[(p, k)], p, k

    @staticmethod
    def _significant(expr, rtol=1e-12):
        """Drop terms whose coefficients are rounding residue of cancellations."""
        if not expr:
            return expr
        cmax = max(abs(c) for c in expr.values())
        return {key: c for key, c in expr.items() if abs(c) > rtol * cmax}

    # structural operations ---------------------------------------------
    def refine(self, points):
        """Same function with extra edges inserted at the given points."""
        pts = sorted({float(x) for x in points if 0 < x < INF} - set(self.edges))
        if not pts:
            return self
        edges = list(self.edges)
        pieces = list(self.pieces)
        if pts[-1] > edges[-1]:
            # extend with zero pieces beyond the support
            extra = [x for x in pts if x > edges[-1]]
            for x in extra:
                edges.append(x)
                pieces.append({})
            pts = [x for x in pts if x <= self.edges[-1]]
        new_edges = [0.0]
        new_pieces = []
        j = 0
        for i, expr in enumerate(pieces):
            hi = edges[i + 1]
            while j < len(pts) and pts[j] < hi:
                if pts[j] > new_edges[-1]:
                    new_edges.append(pts[j])
                    new_pieces.append(expr)
                j += 1
            new_edges.append(hi)
            new_pieces.append(expr)
        return Piecewise(new_edges, new_pieces)

    def extend(self):
        """Make the last edge infinite (appending a zero piece if needed)."""
        if self.edges[-1] == INF:
            return self
        return Piecewise(self.edges + (INF,), self.pieces + ({},))

    def _aligned(self, other):
        a = self.refine(other.edges[1:])
        b = other.refine(self.edges[1:])
        if a.edges[-1] != b.edges[-1]:
            a, b = a.extend(), b.extend()
            a = a.refine(b.edges[1:])
            b = b.refine(a.edges[1:])
        return a, b

    def __add__(self, other):
        if not isinstance(other, Piecewise):
            return NotImplemented
        a, b = self._aligned(other)
        pieces = []
        for e1, e2 in zip(a.pieces, b.pieces):
            acc = dict(e1)
            _add_into(acc, e2)
            pieces.append(acc)
        return Piecewise(a.edges, pieces)

    def __sub__(self, other):
        return self + other * (-1.0)

    def __mul__(self, other):
        if isinstance(other, Piecewise):
            a, b = self._aligned(other)
            return Piecewise(a.edges, [expr_mul(e1, e2) for e1, e2 in zip(a.pieces, b.pieces)])
        c = float(other)
        return Piecewise(self.edges, [{key: c * v for key, v in e.items()} for e in self.pieces])

    __rmul__ = __mul__

    def mul_monomial(self, p, c=1.0, k=0):
        p = as_fraction(p)
        return Piecewise(self.edges, [expr_shift(e, p, c, k) for e in self.pieces])

    def mul_split(self, left, right):
        """Multiply by the expression ``left`` on (0,1] and ``right`` on (1,inf)."""
        g = self.refine([1.0])
        pieces = []
        for i, expr in enumerate(g.pieces):
            hi = g.edges[i + 1]
            pieces.append(expr_mul(expr, left if hi <= 1.0 else right))
        return Piecewise(g.edges, pieces)

    def times_phi(self, alpha, n):
        """Multiply by phi_alpha."""
        a = as_fraction(alpha) / n
        return self.mul_split({(a - 1, 0): 1.0}, {(Fraction(-1), 0): 1.0})

    def restrict(self, lo=0.0, hi=INF):
        """Multiply by the indicator of (lo, hi]."""
        g = self.refine([lo, hi])
        pieces = [expr if (lo <= g.edges[i] and g.edges[i + 1] <= hi) else {} for i, expr in enumerate(g.pieces)]
        return Piecewise(g.edges, pieces)

    # integration ------------------------------------------------------
    def cumulative(self):
        """G(t) = int_0^t g, as a Piecewise extending to infinity."""
        g = self.extend()
        pieces = []
        acc = 0.0
        for i, expr in enumerate(g.pieces):
            lo, hi = g.edges[i], g.edges[i + 1]
            if not expr:
                pieces.append({(Fraction(0), 0): acc} if acc != 0.0 else {})
                continue
            anti = antiderivative(expr)
            start = expr_eval(anti, lo)
            piece = dict(anti)
            key = (Fraction(0), 0)
            piece[key] = piece.get(key, 0.0) + acc - start
            pieces.append(piece)
            if hi != INF:
                acc += expr_eval(anti, hi) - start
        return Piecewise(g.edges, pieces)

    def tail_integral(self):
        """G(t) = int_t^inf g."""
        pieces = [None] * len(self.pieces)
        acc = 0.0
        for i in range(len(self.pieces) - 1, -1, -1):
            expr = self.pieces[i]
            lo, hi = self.edges[i], self.edges[i + 1]
            if not expr:
                pieces[i] = {(Fraction(0), 0): acc} if acc != 0.0 else {}
                continue
            anti = antiderivative(expr)
            end = expr_eval(anti, hi)
            piece = {key: -c for key, c in anti.items()}
            key = (Fraction(0), 0)
            piece[key] = piece.get(key, 0.0) + acc + end
            pieces[i] = piece
            if lo > 0:
                acc += end - expr_eval(anti, lo)
        return Piecewise(self.edges, pieces)

    def integral(self, lo=0.0, hi=INF):
        """int_lo^hi g (exact)."""
        g = self.restrict(lo, hi) if (lo > 0 or hi < INF) else self
        total = 0.0
        for i, expr in enumerate(g.pieces):
            if expr:
                anti = antiderivative(expr)
                total += expr_eval(anti, g.edges[i + 1]) - expr_eval(anti, g.edges[i])
        return total

    def __repr__(self):
        return f"Piecewise({len(self.pieces)} pieces, support_end={self.support_end})"
