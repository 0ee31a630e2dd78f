"""Pure numpy implementations of the hot numerical kernels.

These mirror the compiled routines in ``_kernels.pyx`` one for one and are
used whenever the extension is unavailable (or ``HYPSOB_PURE_PYTHON=1``).
"""
import numpy as np

GL_ORDER = 16
_X, _W = np.polynomial.legendre.leggauss(GL_ORDER)


def _panel_width(n):
    # sinh^(n-1) grows like exp((n-1) t); keep (n-1)*h <= 2 per panel
    return min(1.0, 2.0 / max(n - 1, 1))


def panel_table(rmax, n):
    """Cumulative integrals of sinh^(n-1) over the first full panels of [0, rmax]."""
    h = _panel_width(n)
    m = int(np.ceil(max(float(rmax), 0.0) / h))
    mid = (np.arange(m) + 0.5) * h
    t = mid[:, None] + 0.5 * h * _X[None, :]
    seg = 0.5 * h * (np.sinh(t) ** (n - 1) @ _W)
    return np.concatenate(([0.0], np.cumsum(seg)))


def _volume(r, n, table):
    # full panels come from the table, the remainder is integrated directly
    h = _panel_width(n)
    out = np.zeros_like(r)
    j = np.floor(np.maximum(r, 0.0) / h).astype(int)
    j = np.minimum(j, table.size - 1)
    out += table[j]
    a = j * h
    while True:
        sel = r > a
        if not sel.any():
            break
        b = np.minimum(a[sel] + h, r[sel])
        half = 0.5 * (b - a[sel])
        mid = 0.5 * (b + a[sel])
        t = mid[:, None] + half[:, None] * _X[None, :]
        out[sel] += half * (np.sinh(t) ** (n - 1) @ _W)
        a = np.where(sel, a + h, a)
    return out


def ball_volume(r, n, scale):
    """scale * int_0^r sinh(t)^(n-1) dt for every entry of r (composite GL)."""
    r = np.asarray(r, dtype=float)
    table = panel_table(r.max(initial=0.0), n)
    return scale * _volume(r, n, table)


def _r_inf(v, n, scale):
    # V(r) <= scale e^((n-1)r) / ((n-1) 2^(n-1)), so this is a lower bound for r
    if n > 1:
        return (np.log(v * (n - 1) / scale) + (n - 1) * np.log(2.0)) / (n - 1)
    return np.zeros_like(v)


def inverse_volume(v, n, scale, omega, rtol):
    """Solve V(r) = v elementwise by safeguarded Newton inside a bracket."""
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    pos = v > 0
    if not pos.any():
        return out
    vv = v[pos]
    # V(r) >= omega r^n, so r0 is an upper bound
    hi = (vv / omega) ** (1.0 / n)
    lo = np.maximum(_r_inf(vv, n, scale), 0.0)
    cand = lo + 2.0
    table = panel_table(np.max(np.minimum(hi, cand)), n)
    ok = scale * _volume(cand, n, table) >= vv
    hi = np.where(ok & (cand < hi), cand, hi)
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = scale * _volume(x, n, table) - vv
        lo = np.where(fx < 0, x, lo)
        hi = np.where(fx >= 0, x, hi)
        d = scale * np.sinh(x) ** (n - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - fx / d
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        done = np.abs(xn - x) <= rtol * np.abs(xn) * 0.01
        x = xn
        if done.all():
            break
    out[pos] = x
    return out


def powerlog_eval(t, edges, ptr, p, k, c):
    """Evaluate a piecewise sum of c t^p log(t)^k.

    Piece i covers (edges[i], edges[i+1]] and owns terms ptr[i]:ptr[i+1].
    Points beyond the last edge evaluate to zero.
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    npieces = len(edges) - 1
    idx = np.searchsorted(edges, t, side="left") - 1
    lt = np.log(t)
    for i in range(npieces):
        sel = idx == i
        if not sel.any() or ptr[i] == ptr[i + 1]:
            continue
        ts = t[sel]
        ls = lt[sel]
        acc = np.zeros_like(ts)
        for j in range(ptr[i], ptr[i + 1]):
            term = c[j] * ts ** p[j]
            if k[j]:
                term = term * ls ** k[j]
            acc += term
        out[sel] = acc
    return out


def kernel_integral(alpha, a, b, n):
    """int_a^b phi_alpha for arrays a <= b (alpha > 0 closed form, alpha = 0 log)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if alpha == 0:
        with np.errstate(divide="ignore"):
            return np.log(b) - np.log(a)
    g = alpha / n
    lo = np.minimum(a, 1.0)
    hi = np.minimum(b, 1.0)
    power = (hi ** g - lo ** g) / g
    with np.errstate(divide="ignore"):
        logpart = np.log(np.maximum(b, 1.0)) - np.log(np.maximum(a, 1.0))
    return power + logpart
