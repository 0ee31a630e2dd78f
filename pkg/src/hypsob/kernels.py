"""Backend selection for the hot kernels.

The compiled extension is preferred; the numpy fallback is used when it
cannot be imported or when ``HYPSOB_PURE_PYTHON`` is set to a true value.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("HYPSOB_PURE_PYTHON", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

ball_volume = _impl.ball_volume
inverse_volume = _impl.inverse_volume
powerlog_eval = _impl.powerlog_eval
kernel_integral = _impl.kernel_integral


def get_backend(name):
    """Return the kernel module for ``name`` in {"python", "cython"}."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
