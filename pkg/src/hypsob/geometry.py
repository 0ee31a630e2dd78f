"""Radial geometry of hyperbolic space: ball volumes and the kernels phi_alpha."""
import math

import numpy as np

from . import kernels
from .errors import DomainError

DEFAULT_RTOL = 1e-12


def check_dimension(n, m=None):
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    if m is not None:
        if isinstance(m, bool) or int(m) != m or not 1 <= m < n:
            raise DomainError(f"order m must be an integer with 1 <= m < n (m={m!r}, n={n})")
    return n


def omega(n):
    """Volume of the Euclidean unit ball in R^n, via log-Gamma."""
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0))


def sphere_area(n):
    """n * omega_n, the area of the unit sphere in R^n."""
    return n * omega(n)


def _scalar_or_array(x, out):
    return float(out) if np.ndim(x) == 0 else out


def ball_volume(r, n):
    """V(r) = n omega_n int_0^r sinh^(n-1), for scalar or array r >= 0."""
    n = check_dimension(n)
    r_arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r_arr)) or np.any(r_arr < 0):
        raise DomainError("radius must be finite and nonnegative")
    out = kernels.ball_volume(np.atleast_1d(r_arr), n, sphere_area(n))
    return _scalar_or_array(r, out.reshape(r_arr.shape))


def inverse_volume(v, n, rtol=DEFAULT_RTOL):
    """rho(v), the radius of the hyperbolic ball of volume v."""
    n = check_dimension(n)
    v_arr = np.asarray(v, dtype=float)
    if np.any(~np.isfinite(v_arr)) or np.any(v_arr < 0):
        raise DomainError("volume must be finite and nonnegative")
    out = kernels.inverse_volume(np.atleast_1d(v_arr), n, sphere_area(n), omega(n), rtol)
    return _scalar_or_array(v, out.reshape(v_arr.shape))


def volume_closed_form(r, n):
    """Closed forms for n = 2, 3 (cross-check oracles only)."""
    r = np.asarray(r, dtype=float)
    if n == 2:
        return 2 * np.pi * (np.cosh(r) - 1.0)
    if n == 3:
        return 2 * np.pi * (np.sinh(r) * np.cosh(r) - r)
    raise DomainError("closed form only available for n = 2, 3")


def check_alpha(alpha, n):
    if not (0 <= alpha < n):
        raise DomainError(f"alpha must lie in [0, n), got alpha={alpha}, n={n}")


def phi(alpha, t, n):
    """phi_alpha(t) = min(t^(-1 + alpha/n), 1/t)."""
    check_alpha(alpha, n)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("phi is defined for t > 0")
    out = np.where(t_arr < 1.0, t_arr ** (-1.0 + alpha / n), 1.0 / t_arr)
    return _scalar_or_array(t, out)


def sinh_kernel1(t, n):
    """sinh(rho(t))^(1-n), the exact counterpart of phi_1."""
    return np.sinh(inverse_volume(t, n)) ** (1 - n)


def sinh_kernel2(t, n):
    """t sinh(rho(t))^(2-2n), the exact counterpart of phi_2."""
    t = np.asarray(t, dtype=float)
    return t * np.sinh(inverse_volume(t, n)) ** (2 - 2 * n)


def asymptotic_limits(n):
    """Limits of sinh(rho)^(1-n) / t^(-1+1/n) at 0 and of sinh(rho)^(1-n) / t^(-1) at infinity."""
    w = omega(n)
    return w ** ((n - 1) / n), n * w / (n - 1)


def kernel_asymptotics_check(n, t_small=1e-6, t_large=1e6):
    """Return the two ratios whose limits are given by ``asymptotic_limits``."""
    n = check_dimension(n)
    if not (0 < t_small <= 1e-4 and t_large >= 1e4):
        raise DomainError("need 0 < t_small <= 1e-4 and t_large >= 1e4")
    k = sinh_kernel1(np.array([t_small, t_large]), n)
    return float(k[0] / t_small ** (-1 + 1 / n)), float(k[1] * t_large)


def kernel_brackets(n, t=None):
    """Observed [min, max] of sinh_kernel1/phi_1 and sinh_kernel2/phi_2 on a grid."""
    if t is None:
        t = np.logspace(-6, 6, 241)
    r1 = sinh_kernel1(t, n) / phi(1, t, n)
    r2 = sinh_kernel2(t, n) / phi(2, t, n)
    return (float(r1.min()), float(r1.max())), (float(r2.min()), float(r2.max()))
