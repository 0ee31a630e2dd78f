"""Command-line front end.

    hypsob norm   --space '{"space":"Lp","p":2}' --fn chi01.json
    hypsob apply  --op '{"op":"T","m":3}' --n 5 --fn chi01.json
    hypsob target --m 2 --lz 1 1 0 0
    hypsob verify --suite reduction --m 3 --n 5 --x L1 --seed 7
    hypsob report --seed 7

Exit status: 0 success, 2 malformed input or spec/domain errors, 3 failed
theorem hypotheses, 4 NaN in a result.  Errors are written to stderr as JSON.
"""
import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .errors import ApplicabilityError, HypsobError
from .families import lz_witnesses, random_steps
from .hardy import OperatorSpec, compose
from .norms import INF, Lebesgue, Lorentz, LorentzZygmund, norm, space_from_dict, space_to_dict
from .rearrangement import StepFunction, function_from_dict
from . import targets, verify

VERBS = ("norm", "apply", "target", "verify", "report")
SUITES = ("reduction", "limiting", "laplacian", "polya-szego", "equivalence", "nonexistence", "gradient")


class InputError(HypsobError):
    kind = "input"


class NaNError(HypsobError):
    kind = "nan"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- encoding -------------------------------------------------------------------------

def encode(obj):
    """JSON-safe copy: +-inf become "inf"/"-inf", numpy scalars become Python numbers, NaN raises."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            raise NaNError("result contains NaN")
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def to_csv(payload):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if rows:
        keys = list(rows[0].keys())
        w.writerow(keys)
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in keys])
    else:
        w.writerow(["key", "value"])
        for k, v in _flatten(payload):
            w.writerow([k, _fmt(v)])
    return buf.getvalue()


def render(payload, fmt):
    payload = encode(payload)
    if fmt == "csv":
        return to_csv(payload)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- inputs -----------------------------------------------------------------------------

def _load(text):
    """Inline JSON, a path to a JSON file, or a bare shorthand string."""
    if text is None:
        return None
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if text.strip().startswith(("{", "[")):
            raise InputError(f"malformed JSON: {text[:60]!r}")
        return text.strip()


def _space(text, required=True):
    doc = _load(text)
    if doc is None:
        if required:
            raise InputError("a space is required")
        return None
    return space_from_dict(doc)


def _fn(text):
    doc = _load(text)
    if doc is None:
        raise InputError("--fn is required")
    if not isinstance(doc, dict):
        raise InputError("--fn must be a JSON object")
    return function_from_dict(doc)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"--{name.replace('_', '-')} is required for this command")


# -- verbs --------------------------------------------------------------------------------

def cmd_norm(args):
    X = _space(args.space)
    f = _fn(args.fn)
    v = norm(X, f)
    return {"space": space_to_dict(X), "function": f.to_dict(), **v.to_dict()}


def cmd_apply(args):
    doc = _load(args.op)
    if isinstance(doc, str):
        _need(args, "m")
        doc = {"op": doc, "m": args.m}
    if not isinstance(doc, dict):
        raise InputError("--op must be an operator document or T/S")
    if args.n is not None:
        doc.setdefault("n", args.n)
    spec = OperatorSpec.from_dict(doc)
    f = _fn(args.fn)
    lo, hi, size = args.grid
    t = np.geomspace(lo, hi, int(size))
    vals = np.asarray(compose(spec, f)(t), dtype=float)
    return {"operator": spec.to_dict(), "rows": [{"t": float(a), "value": float(b)} for a, b in zip(t, vals)]}


def cmd_target(args):
    _need(args, "m")
    n = args.n if args.n is not None else max(3, args.m + 1)
    if args.lz is not None:
        p, q, a0, ainf = (float(v) if v not in ("inf", "Infinity") else INF for v in args.lz)
        return targets.lz_optimal_target(args.m, p, q, (a0, ainf), n).to_dict()
    X = _space(args.space or args.x)
    return targets.optimal_target(args.m, X, n).to_dict()


def _lz_params(X):
    if isinstance(X, Lebesgue):
        return X.p, X.p, (0.0, 0.0)
    if isinstance(X, Lorentz):
        return X.p, X.q, (0.0, 0.0)
    if isinstance(X, LorentzZygmund):
        return X.p, X.q, X.A
    return None


def _target_space(m, X, n):
    lz = _lz_params(X)
    desc = targets.lz_optimal_target(m, *lz, n) if lz else targets.optimal_target(m, X, n)
    if desc.result is None:
        raise ApplicabilityError("no optimal target exists for this domain", ["existence_condition"],
                                 details=desc.to_dict())
    return desc


def suite_reduction(args):
    _need(args, "m", "n")
    X = _space(args.x or args.space)
    lz = _lz_params(X)
    extra = lz_witnesses(lz[0], lz[2]) if lz else []
    fam, ref = verify.family_pair(args.family_size, args.seed, extra)
    if args.y:
        Y, row = _space(args.y), "given"
    else:
        desc = _target_space(args.m, X, args.n)
        Y, row = desc.result, desc.row
    res = verify.reduction_ratio_suite(args.m, X, Y, fam, args.n, args.op or "T", ref, args.tol)
    res.parameters.update({"seed": args.seed, "row": row})
    return res.to_dict()


def suite_limiting(args):
    _need(args, "m", "n", "case")
    extra = lz_witnesses(INF, (0.0, args.alpha_inf)) if args.case == "Linf-LZ" and args.alpha_inf else []
    fam, ref = verify.family_pair(args.family_size, args.seed, extra)
    res = verify.limiting_inequalities_check(args.case, args.n, args.m, fam, args.alpha_inf, ref, args.tol)
    res.parameters["seed"] = args.seed
    return res.to_dict()


def suite_laplacian(args):
    n = args.n or 3
    f = _fn(args.fn) if args.fn else verify.smooth_bump(1.0, 2.0)
    prof = verify.build_profile(2, f, n)
    support, _ = verify.check_admissible(f)
    d0 = float(verify.inverse_volume(0.5 * support[0], n))
    d1 = float(verify.inverse_volume(1.5 * support[1], n))
    r = verify.distance_grid(d0, d1, 201)
    lap = verify.radial_laplacian(prof, r)
    target = verify.laplacian_target(f, n, r)
    scale = float(np.max(np.abs(target))) or 1.0
    err = float(np.max(np.abs(lap - target)) / scale)
    return {"case": "laplacian", "parameters": {"n": n}, "max_relative_error": err, "pass": err < args.tol,
            "rows": [{"r": float(a), "laplacian": float(b), "target": float(c)} for a, b, c in zip(r, lap, target)]}


def suite_polya(args):
    n = args.n or 3
    X = _space(args.x or args.space or "L2")
    f = _fn(args.fn) if args.fn else StepFunction.indicator(1.0, 2.0)
    prof = verify.build_profile(args.m or 1, f, n)
    lhs, rhs = verify.polya_szego_radial_check(prof, X)
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300) if rhs else abs(lhs)
    return {"case": "polya-szego", "parameters": {"n": n, "m": args.m or 1, "X": space_to_dict(X)},
            "lhs": lhs, "rhs": rhs, "relative_gap": rel, "pass": rel < args.tol}


def suite_equivalence(args):
    _need(args, "m", "n", "pair")
    X = _space(args.x or args.space)
    fam = random_steps(args.family_size, args.seed)
    ref = random_steps(2 * args.family_size, args.seed)
    a = targets.equivalence_certify(args.pair, args.m, X, fam, args.n)
    b = targets.equivalence_certify(args.pair, args.m, X, ref, args.n)
    drift = max(abs(b["max_ratio"] - a["max_ratio"]) / b["max_ratio"],
                abs(b["min_ratio"] - a["min_ratio"]) / b["min_ratio"])
    return {"case": "equivalence", "parameters": {"pair": args.pair, "m": args.m, "n": args.n, "seed": args.seed},
            "family": a, "doubled_family": b, "refinement_delta": drift, "pass": bool(b["finite"] and drift < args.tol)}


def suite_nonexistence(args):
    _need(args, "m", "n")
    X = _space(args.x or args.space or "Linf")
    ok, witness = targets.existence_condition(args.m, X)
    cert = targets.nonexistence_certificate(args.m, X, args.n)
    return {"case": "nonexistence", "parameters": {"m": args.m, "n": args.n, "X": space_to_dict(X)},
            "existence_condition": ok, "witness": witness, "certificate": cert}


def suite_gradient(args):
    _need(args, "m", "n")
    X = _space(args.x or args.space or "L2")
    f = _fn(args.fn) if args.fn else StepFunction.indicator(1.0, 2.0)
    lhs, rhs = verify.gradient_norm_identity(args.m, X, f, args.n)
    rel = abs(lhs - rhs) / rhs if rhs else abs(lhs)
    return {"case": "gradient", "parameters": {"m": args.m, "n": args.n, "X": space_to_dict(X)},
            "lhs": lhs, "rhs": rhs, "relative_gap": rel, "pass": rel < args.tol}


_SUITES = {"reduction": suite_reduction, "limiting": suite_limiting, "laplacian": suite_laplacian,
           "polya-szego": suite_polya, "equivalence": suite_equivalence, "nonexistence": suite_nonexistence,
           "gradient": suite_gradient}


def cmd_verify(args):
    _need(args, "suite")
    return _SUITES[args.suite](args)


REPORT_PAIRS = ((3, 1), (3, 2), (5, 3), (6, 4))


def cmd_report(args):
    """Reduction suites for every applicable table row at the standard (n, m) pairs."""
    rows = []
    pairs = [(args.n, args.m)] if args.n and args.m else REPORT_PAIRS
    for n, m in pairs:
        for p, q, A in report_domains(n, m):
            X = LorentzZygmund(p, q, A)
            desc = targets.lz_optimal_target(m, p, q, A, n)
            if desc.result is None:
                continue
            fam, ref = verify.family_pair(args.family_size, args.seed, lz_witnesses(p, A))
            res = verify.reduction_ratio_suite(m, X, desc.result, fam, n, "T", ref, args.tol)
            rows.append({"n": n, "m": m, "row": desc.row, "p": p, "q": q, "alpha0": A[0], "alpha_inf": A[1],
                         "constant": res.constant, "refinement_delta": res.refinement_delta, "pass": res.passed})
    return {"report": "lz-table", "seed": args.seed, "rows": rows}


def report_domains(n, m):
    """Representative domains L^{p,q;A}; the table decides which row each one hits."""
    crit = n / m
    return [(1.0, 1.0, (0.0, 0.0)), (0.5 * (1.0 + crit), 2.0, (0.0, 0.0)), (crit, 2.0, (0.0, 0.0)),
            (crit, 2.0, (0.5, 0.0)), (crit, 1.0, (0.0, 0.0)), (crit + 1.0, 2.0, (0.0, 0.0)),
            (INF, INF, (0.0, math.ceil(m / 2) + 1.0))]


_VERBS = {"norm": cmd_norm, "apply": cmd_apply, "target": cmd_target, "verify": cmd_verify, "report": cmd_report}


def build_parser():
    ap = _Parser(prog="hypsob", description="Rearrangement-invariant norms and optimal Sobolev targets.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("--space")
    ap.add_argument("--fn")
    ap.add_argument("--op")
    ap.add_argument("--m", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--lz", nargs=4, metavar=("P", "Q", "A0", "AINF"))
    ap.add_argument("--x")
    ap.add_argument("--y")
    ap.add_argument("--suite", choices=SUITES)
    ap.add_argument("--case", choices=verify.LIMITING_CASES)
    ap.add_argument("--pair", choices=("nu~sigma", "sigma~lambda", "nu~mu"))
    ap.add_argument("--alpha-inf", type=float)
    ap.add_argument("--grid", nargs=3, type=float, default=(1e-3, 1e3, 61), metavar=("LO", "HI", "COUNT"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--family-size", type=int, default=200)
    ap.add_argument("--tol", type=float, default=0.1)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


def run(argv):
    """Execute one command; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
        text = render(_VERBS[args.verb](args), args.format)
    except NaNError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return 4
    except ApplicabilityError as exc:
        sys.stderr.write(json.dumps(encode(exc.to_dict()), sort_keys=True) + "\n")
        return 3
    except HypsobError as exc:
        sys.stderr.write(json.dumps(encode(exc.to_dict()), sort_keys=True) + "\n")
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
