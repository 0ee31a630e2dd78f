"""Optimal target norms for the hyperbolic Sobolev inequality.

Given a domain space X, the target's associate norm is one of four
operator-induced functionals evaluated in X':

    nu:     R_1 (H_2 P)^k g*      (m odd)      (H_2 P)^(k+1) g*   (m even)
    sigma:  R_beta R_2^k g*
    lambda: R_m g*
    mu:     R_1 H_2^k g**         (m odd)      H_2^(k+1) g**      (m even)

with k = ceil(m/2 - 1), beta = 1 (m odd) or 2 (m even).  nu always works;
sigma, lambda and mu need boundedness of f -> f** on X and/or X', which is
checked before evaluation.  For Lorentz-Zygmund X the target is also read
off a declarative table.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from . import hardy
from .errors import ApplicabilityError, DomainError, RestrictedScopeError, SpecError
from .geometry import check_dimension
from .hardy import derived_k_beta
from .norms import (INF, Associate, ClassicalLorentz, Intersection, Lebesgue, Lorentz, LorentzZygmund,
                    Named, NormValue, OperatorInduced, Sum, _lz_from, as_star, associate_space,
                    check_legal, conjugate, lz_is_norm, maximal_bounded, norm, powerlog_membership,
                    space_to_dict, v1_weight, v2_weight, v3_weight, EXP_TOL)
from .piecewise import Piecewise
from .rearrangement import PowerLogFunction, StepFunction

KINDS = ("general-nu", "sigma", "lambda", "mu", "euclidean-intersection", "supercritical-Linf", "LZ-table")


# -- operator-induced functionals ------------------------------------------------

def _star_piecewise(g):
    """g* as an exact Piecewise (steps and nonincreasing piecewise inputs)."""
    if isinstance(g, StepFunction):
        from .rearrangement import rearrange
        return rearrange(g).to_piecewise()
    star = as_star(g)
    if not hasattr(star, "g"):
        raise RestrictedScopeError("operator-induced functionals need a piecewise representation")
    return star.g


def induced_function(kind, m, g, n):
    """The function whose base norm defines the ``kind`` functional of g."""
    n = check_dimension(n, m)
    k, beta = derived_k_beta(m)
    s = _star_piecewise(g)
    if kind == "nu":
        h = hardy.HP_power(2, k, s, n)
        return hardy.apply_R(1, h, n) if beta == 1 else hardy.HP_power(2, 1, h, n)
    if kind == "sigma":
        return hardy.apply_R(beta, hardy.R_power(2, k, s, n), n)
    if kind == "lambda":
        return hardy.apply_R(m, s, n)
    if kind == "mu":
        ds = hardy.apply_P(s)
        if beta == 1:
            return hardy.apply_R(1, hardy.H_power(2, k, ds, n), n)
        return hardy.H_power(2, k + 1, ds, n)
    raise SpecError(f"unknown functional kind {kind!r}")


def operator_functional(kind, m, base, g, n, trunc=(None, None)):
    """||op g*||_base without any applicability check (the defining functional)."""
    if as_star(g).is_zero():
        return NormValue(0.0, "exact")
    h = induced_function(kind, m, g, n)
    return norm(base, h, trunc=trunc) if not isinstance(base, Lebesgue) else _lebesgue_norm(base, h, trunc)


def _lebesgue_norm(space, h, trunc):
    """Lebesgue norms need no rearrangement: integrate |h|^p directly."""
    from .norms import PiecewiseStar
    return norm(space, PiecewiseStar(h), trunc=trunc)


def _applicability(kind, m, X):
    """Hypotheses of the theorem behind each construction, as (name, holds) pairs."""
    checks = []
    if kind == "sigma":
        if m >= 2:
            checks.append(("f** bounded on X", maximal_bounded(X, "X")))
    elif kind == "lambda":
        if m >= 3:
            checks.append(("f** bounded on X", maximal_bounded(X, "X")))
            checks.append(("f** bounded on X'", maximal_bounded(X, "X'")))
        elif m == 2:
            checks.append(("f** bounded on X", maximal_bounded(X, "X")))
    elif kind == "mu":
        if m != 2:
            checks.append(("f** bounded on X'", maximal_bounded(X, "X'")))
    return checks


def _checked(kind, m, X, g, n):
    checks = _applicability(kind, m, X)
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise ApplicabilityError(f"{kind} construction for m={m} is not applicable", failed)
    Xa = associate_space(X)
    val = operator_functional(kind, m, Xa, g, n)
    if not val.finite:
        ok, witness = existence_condition(m, X)
        val.certificate = dict(val.certificate or {}, existence_condition=ok, witness=witness)
    return val


def target_norm_nu(m, X, g, n):
    """||g||_{Y'} for the general construction: nu_{m,X'}(g)."""
    return _checked("nu", m, X, g, n)


def target_norm_sigma(m, X, g, n):
    return _checked("sigma", m, X, g, n)


def target_norm_lambda(m, X, g, n):
    return _checked("lambda", m, X, g, n)


def target_norm_mu(m, X, g, n):
    return _checked("mu", m, X, g, n)


# -- conditions -----------------------------------------------------------------

def _member(g, space, half):
    try:
        return powerlog_membership(g, space, half)
    except SpecError as exc:
        raise RestrictedScopeError(f"membership in {type(space).__name__} is not decidable here") from exc


def _raw(space):
    if isinstance(space, (Intersection, Sum)):
        return type(space)(tuple(_raw(s) for s in space.spaces))
    lz = _lz_from(space)
    return LorentzZygmund(lz.p, lz.q, lz.A, lz.B, form="raw")


def _dual_raw(X):
    check_legal(X)
    return _raw(associate_space(X))


def existence_condition(m, X):
    """(1 + log t)^k / t on (1, inf) in X'?  Returns (bool, witness)."""
    k, _ = derived_k_beta(m)
    g = PowerLogFunction(1.0, 0.0, float(k))
    ok = _member(g, _dual_raw(X), "upper")
    return ok, {"function": f"(1+log t)^{k}/t on (1,inf)", "space": space_to_dict(associate_space(X)), "member": ok}


def subcritical_condition(m, X, n):
    """t^(-1+m/n) on (1, inf) in X'?"""
    check_dimension(n, m)
    return _member(PowerLogFunction(1.0 - m / n), _dual_raw(X), "upper")


def supercritical_condition(m, X, n):
    """t^(-1+m/n) on (0,1) plus (1 + log t)^k / t on (1, inf) in X'?"""
    check_dimension(n, m)
    k, _ = derived_k_beta(m)
    Xa = _dual_raw(X)
    return _member(PowerLogFunction(1.0 - m / n), Xa, "lower") and \
        _member(PowerLogFunction(1.0, 0.0, float(k)), Xa, "upper")


# -- Lorentz-Zygmund table ---------------------------------------------------------

@dataclass
class TargetDescription:
    m: int
    n: int
    base: object
    kind: str
    result: object = None
    row: str = ""
    applicability: dict = field(default_factory=dict)
    certificate: dict = None

    @property
    def exists(self):
        return self.result is not None

    def to_dict(self):
        return {"m": self.m, "n": self.n, "base": space_to_dict(self.base), "kind": self.kind, "row": self.row,
                "result": space_to_dict(self.result) if self.result is not None else None,
                "applicability": dict(self.applicability), "certificate": self.certificate}


def _eq(a, b):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= EXP_TOL * max(1.0, abs(a), abs(b))


def _rows(m, n, p, q, A):
    a0, ainf = A
    crit = n / m
    qc = 1.0 / conjugate(q) if conjugate(q) < INF else 0.0   # 1/q'
    at_crit = _eq(p, crit)
    half = math.ceil(m / 2)
    return [
        ("v1", (m == 1 and p == q == 1 and a0 >= 0 and ainf <= 0) or (1 < p < crit and not at_crit)),
        ("Z1", m >= 3 and m % 2 == 1 and p == q == 1 and a0 == 0 and ainf == 0),
        ("Z2", m % 2 == 0 and p == q == 1 and a0 == 0 and ainf == 0),
        ("v2", at_crit and a0 < qc - EXP_TOL),
        ("v3", at_crit and q > 1 and _eq(a0, qc)),
        ("Linf-cap-X", (at_crit and q == 1 and a0 >= 0) or (at_crit and q > 1 and a0 > qc + EXP_TOL)
         or (crit < p < INF and not at_crit)),
        ("Z3", p == q == INF and a0 <= 0 and ainf > half + EXP_TOL),
        ("none", p == q == INF and ainf <= half + EXP_TOL),
    ]


def lz_optimal_target(m, p, q, A, n):
    """Optimal target for X = L^{p,q;A} from the Lorentz-Zygmund table (first matching row)."""
    n = check_dimension(n, m)
    A = tuple(float(a) for a in A)
    if not lz_is_norm(p, q, A):
        raise SpecError(f"L^{{{p},{q};{list(A)}}} is not equivalent to a norm")
    X = LorentzZygmund(p, q, A)
    flags = {"lz_is_norm": True}
    for row, guard in _rows(m, n, p, q, A):
        if not guard:
            continue
        if row == "v1":
            res = ClassicalLorentz(q, v1_weight(n, m, p, q, A))
        elif row in ("Z1", "Z2"):
            res = Named(row, m, n)
        elif row == "v2":
            res = ClassicalLorentz(q, v2_weight(n, m, q, A))
        elif row == "v3":
            res = ClassicalLorentz(q, v3_weight(n, m, q, A))
        elif row == "Linf-cap-X":
            res = Intersection((Lebesgue(INF), X))
        elif row == "Z3":
            res = Named("Z3", m, n, A[1])
        else:
            ok, witness = existence_condition(m, X)
            flags["existence_condition"] = ok
            return TargetDescription(m, n, X, "LZ-table", None, row, flags,
                                     {"failed": "existence_condition", "witness": witness,
                                      "divergence": nonexistence_certificate(m, X, n)})
        return TargetDescription(m, n, X, "LZ-table", res, row, flags)
    return optimal_target(m, X, n)


def optimal_target(m, X, n):
    """Optimal target for a general X through the first applicable theorem."""
    n = check_dimension(n, m)
    check_legal(X)
    ok, witness = existence_condition(m, X)
    flags = {"existence_condition": ok}
    if not ok:
        return TargetDescription(m, n, X, "general-nu", None, "none", flags,
                                 {"failed": "existence_condition", "witness": witness})
    try:
        on_x = maximal_bounded(X, "X")
        on_xa = maximal_bounded(X, "X'")
        flags.update({"f** bounded on X": on_x, "f** bounded on X'": on_xa})
    except RestrictedScopeError:
        on_x = on_xa = None
    Xa = associate_space(X)
    if m == 1 or on_x:
        kind, op = "sigma", "sigma"
    elif m == 2 or on_xa:
        kind, op = "mu", "mu"
    else:
        kind, op = "general-nu", "nu"
    return TargetDescription(m, n, X, kind, Associate(OperatorInduced(op, m, n, Xa)), kind, flags)


# -- certificates ----------------------------------------------------------------------

_PAIRS = {"nu~sigma": ("nu", "sigma"), "sigma~lambda": ("sigma", "lambda"), "nu~mu": ("nu", "mu")}


def equivalence_certify(pair, m, X, family, n):
    """Two-sided ratio of two operator-induced functionals (base X) over a family.

    nu~sigma needs f -> f** bounded on X'; sigma~lambda and nu~mu need it
    bounded on X together with (1 + log t)^k / t on (1, inf) in X.
    """
    if pair not in _PAIRS:
        raise SpecError(f"unknown pair {pair!r}")
    check_legal(X)
    k, _ = derived_k_beta(m)
    if pair == "nu~sigma":
        checks = [("f** bounded on X'", maximal_bounded(X, "X'"))]
    else:
        in_x = _member(PowerLogFunction(1.0, 0.0, float(k)), _raw(X), "upper")
        checks = [("f** bounded on X", maximal_bounded(X, "X")), ("(1+log t)^k/t in X", in_x)]
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise ApplicabilityError(f"{pair} equivalence hypotheses fail", failed)
    a, b = _PAIRS[pair]
    ratios = []
    for g in family:
        va = operator_functional(a, m, X, g, n).value
        vb = operator_functional(b, m, X, g, n).value
        if va == 0 and vb == 0:
            continue
        ratios.append(va / vb)
    ratios = np.array(ratios)
    return {"pair": pair, "m": m, "n": n, "space": space_to_dict(X), "size": len(family),
            "min_ratio": float(ratios.min()), "max_ratio": float(ratios.max()),
            "finite": bool(np.all(np.isfinite(ratios)) and ratios.min() > 0)}


def domination_constant(lower, upper, m, X, family, n):
    """sup over the family of lower/upper (e.g. sigma/nu or lambda/sigma)."""
    worst = 0.0
    for g in family:
        u = operator_functional(upper, m, X, g, n).value
        l = operator_functional(lower, m, X, g, n).value
        if u > 0:
            worst = max(worst, l / u)
    return worst


def intersection_pieces(case, n, m, p=None, q=None, A=(0.0, 0.0)):
    """(table space, first piece, second piece) for the intersection form of a table row."""
    A = tuple(float(a) for a in A)
    qi = 1.0 / q if q is not None and q < INF else 0.0
    if case == "v1":
        return (ClassicalLorentz(q, v1_weight(n, m, p, q, A)),
                LorentzZygmund(n * p / (n - m * p), q, A, form="raw"), LorentzZygmund(p, q, A, form="raw"))
    if case == "v2":
        return (ClassicalLorentz(q, v2_weight(n, m, q, A)),
                LorentzZygmund(INF, q, (A[0] - 1.0, A[1]), form="raw"), LorentzZygmund(n / m, q, A, form="raw"))
    if case == "v3":
        return (ClassicalLorentz(q, v3_weight(n, m, q, A)),
                LorentzZygmund(INF, q, (-qi, A[1]), (-1.0, 0.0), form="raw"),
                LorentzZygmund(n / m, q, (1.0 - qi, A[1]), form="raw"))
    if case == "Z1":
        return (Named("Z1", m, n), LorentzZygmund(n / (n - m), 1.0, form="raw"),
                LorentzZygmund(1.0, INF, (0.0, -(m - 1) / 2), form="maximal"))
    if case == "Z2":
        return (Named("Z2", m, n), LorentzZygmund(n / (n - m), INF, form="raw"),
                LorentzZygmund(1.0, INF, (0.0, -m / 2), form="maximal"))
    if case == "Z3":
        return (Named("Z3", m, n, A[1]), Lebesgue(INF),
                LorentzZygmund(INF, INF, (A[0], A[1] - math.ceil(m / 2)), form="raw"))
    raise SpecError(f"unsupported decomposition case {case!r}")


def intersection_decomposition_check(case, family, n, m, p=None, q=None, A=(0.0, 0.0)):
    """Ratio of a table norm to the max of the two norms of its intersection form.

    Cases: "v1", "v2", "v3" (need p, q, A as in the table), "Z1", "Z2" and
    "Z3" (A = [alpha_0, alpha_inf]).  Pairs where both sides vanish are
    skipped; an all-zero family gives the ratio 1.
    """
    left, r1, r2 = intersection_pieces(case, n, m, p, q, A)
    ratios = []
    for g in family:
        lv = norm(left, g).value
        rv = max(_nocheck_norm(r1, g), _nocheck_norm(r2, g))
        if lv == 0 and rv == 0:
            continue
        ratios.append(lv / rv)
    if not ratios:
        return {"case": case, "min_ratio": 1.0, "max_ratio": 1.0, "size": len(family), "empty": True}
    return {"case": case, "min_ratio": float(min(ratios)), "max_ratio": float(max(ratios)), "size": len(family),
            "empty": False}


def _nocheck_norm(space, g):
    """Norm without the legality check (intersection pieces may be quasinorms)."""
    from .norms import _blocks, _block_value
    star = as_star(g)
    if star.is_zero():
        return 0.0
    return sum(_block_value(star, b)[0] for b in _blocks(space))


def nonexistence_certificate(m, X, n, Ts=(1e2, 1e4, 1e6)):
    """Growth of the truncated nu-functional of chi_(0,1) when the existence condition fails.

    Returns the truncated values at each T, the expected growth exponent of
    (1 + log T) (or of log(1 + log T) at the borderline) and the exponent
    fitted from the increments across the three truncations.
    """
    check_dimension(n, m)
    k, _ = derived_k_beta(m)
    Xa = associate_space(X)
    chi = StepFunction.indicator(1.0)
    vals = [operator_functional("nu", m, Xa, chi, n, trunc=(None, float(T))).value for T in Ts]
    lz = _lz_from(Xa) if isinstance(Xa, (Lebesgue, Lorentz, LorentzZygmund)) else None
    expected, loglog = None, False
    if lz is not None and lz.p == 1:
        expected = k + 1 + lz.A[1]
        loglog = abs(expected) <= EXP_TOL
    L = [1.0 + math.log(T) for T in Ts]
    if loglog:
        L = [math.log(x) for x in L]
    fitted = increment_rate(vals, L)
    return {"T": list(Ts), "values": vals, "monotone": bool(all(b > a for a, b in zip(vals, vals[1:]))),
            "expected_exponent": 1.0 if loglog else expected, "fitted_exponent": fitted,
            "rate": "log(1+log T)" if loglog else "1+log T"}


def increment_rate(vals, L):
    """Exponent s with (L3^s - L2^s)/(L2^s - L1^s) equal to the observed increment ratio.

    Increments cancel the additive constant coming from (0, 1); the fit is
    exact for a + b L^s and returns nan when the ratio is not attained.
    """
    if len(vals) < 3 or not all(math.isfinite(v) for v in vals[-3:]):
        return float("nan")
    v0, v1, v2 = vals[-3:]
    l0, l1, l2 = L[-3:]
    if v1 <= v0:
        return float("nan")
    r = (v2 - v1) / (v1 - v0)

    def g(s):
        if abs(s) < 1e-12:
            return math.log(l2 / l1) / math.log(l1 / l0) - r
        return (l2 ** s - l1 ** s) / (l1 ** s - l0 ** s) - r

    lo, hi = -20.0, 20.0
    if g(lo) * g(hi) > 0:
        return float("nan")
    return float(brentq(g, lo, hi, xtol=1e-12))
