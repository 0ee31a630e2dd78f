# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_kernels_py``.

Same signatures and semantics; the per-element loops (composite quadrature,
safeguarded Newton, piecewise term sums) run without Python overhead.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sinh, log, pow, fabs, floor, fmin, fmax, isfinite

from . import _kernels_py as _py

cnp.import_array()

GL_ORDER = 16
_X, _W = np.polynomial.legendre.leggauss(GL_ORDER)
cdef double[16] GX
cdef double[16] GW
for _i in range(16):
    GX[_i] = _X[_i]
    GW[_i] = _W[_i]


cdef inline double _ipow(double x, int e) nogil:
    cdef double r = 1.0
    while e > 0:
        if e & 1:
            r *= x
        x *= x
        e >>= 1
    return r


cdef double _volume(double r, int n, double scale, const double[::1] table) noexcept nogil:
    cdef double h = fmin(1.0, 2.0 / (n - 1 if n > 1 else 1))
    cdef Py_ssize_t j
    cdef double total, a, b, half, mid, s
    cdef int i
    if r <= 0:
        return 0.0
    j = <Py_ssize_t>floor(r / h)
    if j > table.shape[0] - 1:
        j = table.shape[0] - 1
    total = table[j]
    a = j * h
    while r > a:
        b = fmin(a + h, r)
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        s = 0.0
        for i in range(16):
            s += GW[i] * _ipow(sinh(mid + half * GX[i]), n - 1)
        total += half * s
        a += h
    return scale * total


def ball_volume(r, int n, double scale):
    cdef double[::1] rv = np.ascontiguousarray(r, dtype=float).ravel()
    out = np.empty(rv.shape[0])
    cdef double[::1] ov = out
    cdef const double[::1] tab = _py.panel_table(np.max(rv, initial=0.0), n)
    cdef Py_ssize_t i
    with nogil:
        for i in range(rv.shape[0]):
            ov[i] = _volume(rv[i], n, scale, tab)
    return out.reshape(np.shape(r))


cdef inline double _r_inf(double v, int n, double scale) noexcept nogil:
    if n > 1:
        return (log(v * (n - 1) / scale) + (n - 1) * log(2.0)) / (n - 1)
    return 0.0


cdef double _invert(double v, int n, double scale, double omega, double rtol,
                    const double[::1] tab) noexcept nogil:
    cdef double lo, hi, x, fx, d, xn, cand
    cdef int it
    if v <= 0:
        return 0.0
    hi = pow(v / omega, 1.0 / n)
    lo = fmax(_r_inf(v, n, scale), 0.0)
    cand = lo + 2.0
    if cand < hi and _volume(cand, n, scale, tab) >= v:
        hi = cand
    x = 0.5 * (lo + hi)
    for it in range(200):
        fx = _volume(x, n, scale, tab) - v
        if fx < 0:
            lo = x
        else:
            hi = x
        d = scale * _ipow(sinh(x), n - 1)
        xn = x - fx / d
        if not isfinite(xn) or xn <= lo or xn >= hi:
            xn = 0.5 * (lo + hi)
        if fabs(xn - x) <= rtol * fabs(xn) * 0.01:
            return xn
        x = xn
    return x


def inverse_volume(v, int n, double scale, double omega, double rtol):
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=float).ravel()
    out = np.empty(vv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double rmax = 0.0
    for i in range(vv.shape[0]):
        if vv[i] > 0:
            rmax = fmax(rmax, fmin(pow(vv[i] / omega, 1.0 / n),
                                   fmax(_r_inf(vv[i], n, scale), 0.0) + 2.0))
    cdef const double[::1] tab = _py.panel_table(rmax, n)
    with nogil:
        for i in range(vv.shape[0]):
            ov[i] = _invert(vv[i], n, scale, omega, rtol, tab)
    return out.reshape(np.shape(v))


def powerlog_eval(t, edges, ptr, p, k, c):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=float).ravel()
    cdef double[::1] ev = np.ascontiguousarray(edges, dtype=float)
    cdef long[::1] pv = np.ascontiguousarray(ptr, dtype=np.int_)
    cdef double[::1] pw = np.ascontiguousarray(p, dtype=float)
    cdef long[::1] kv = np.ascontiguousarray(k, dtype=np.int_)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=float)
    out = np.zeros(tv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j, lo, hi, mid, npieces = ev.shape[0] - 1
    cdef double x, lx, acc
    with nogil:
        for i in range(tv.shape[0]):
            x = tv[i]
            if not (x > ev[0]) or x > ev[npieces]:
                continue
            # piece index: largest lo with edges[lo] < x
            lo = 0
            hi = npieces
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if ev[mid] < x:
                    lo = mid
                else:
                    hi = mid
            lx = log(x)
            acc = 0.0
            for j in range(pv[lo], pv[lo + 1]):
                if kv[j]:
                    acc += cv[j] * pow(x, pw[j]) * _ipow(lx, <int>kv[j])
                else:
                    acc += cv[j] * pow(x, pw[j])
            ov[i] = acc
    return out.reshape(np.shape(t))


def kernel_integral(double alpha, a, b, int n):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=float).ravel()
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=float).ravel()
    out = np.empty(av.shape[0])
    cdef double[::1] ov = out
    cdef double g = alpha / n, lo, hi
    cdef Py_ssize_t i
    with nogil:
        for i in range(av.shape[0]):
            if alpha == 0:
                ov[i] = log(bv[i]) - log(av[i])
            else:
                lo = fmin(av[i], 1.0)
                hi = fmin(bv[i], 1.0)
                ov[i] = (pow(hi, g) - pow(lo, g)) / g + log(fmax(bv[i], 1.0)) - log(fmax(av[i], 1.0))
    return out.reshape(np.shape(a))
