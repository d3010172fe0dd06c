"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``SHIFTDECONV_PURE_PYTHON`` is set to a non-empty value,
the numpy implementation is used. Both give bit-identical results.
"""

import os

from . import _pykernels

_ckernels = None
if not os.environ.get("SHIFTDECONV_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None

_active = _ckernels if _ckernels is not None else _pykernels


def backend():
    """Name of the active backend: ``"cython"`` or ``"python"``."""
    return _active.BACKEND


def available_backends():
    return ["python"] + (["cython"] if _ckernels is not None else [])


def use_backend(name):
    """Switch the active backend; returns the previous name."""
    global _active
    previous = _active.BACKEND
    if name == "python":
        _active = _pykernels
    elif name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        _active = _ckernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    return previous


def convolve_rows(x, s):
    return _active.convolve_rows(x, s)


def shift_add_rows(x, shift, coeff):
    return _active.shift_add_rows(x, shift, coeff)


def step_iterate(s, h, factor):
    return _active.step_iterate(s, h, factor)


def combine_rows(h, mu, half, start, count):
    return _active.combine_rows(h, mu, half, start, count)


def solve_transposed(sigma, e):
    return _active.solve_transposed(sigma, e)
