"""Lifting the 1D shift methods to rasters.

A blur along one axis acts on every row (X) or column (Y) of every channel
independently, so each image routine reshapes the raster into a stack of
lines and hands the whole stack to the 1D machinery at once. The kernel
side of every method (the step coefficients, the doubling factors, the
combination ``mu``) depends only on the kernel and is computed once per
call.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from . import kernels
from .combined import make_combination
from .errors import (BlurWiderThanImage, DeconvolutionError, Divergent,
                     HalfWidthTooSmall, IncompleteResponse, KernelShape,
                     LeadingZeroKernel, UsageError)
from .signals import Signal1D
from .step import doubling_steps, two_term


class Axis(enum.Enum):
    X = "x"
    Y = "y"

    @classmethod
    def parse(cls, value):
        if isinstance(value, Axis):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UsageError(
                f"axis must be 'x' or 'y', got {value!r}; rotate the image first "
                "for motion that is not axis-parallel") from None


@dataclass(frozen=True, eq=False)
class ImageRaster:
    """Samples stored as a ``(height, width, channels)`` float array."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise ValueError("image samples must have shape (height, width, 1|3)")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("image samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def height(self):
        return self.samples.shape[0]

    @property
    def width(self):
        return self.samples.shape[1]

    @property
    def channels(self):
        return self.samples.shape[2]

    def extent(self, axis):
        return self.width if Axis.parse(axis) is Axis.X else self.height

    def channel(self, c):
        return ImageRaster(self.samples[:, :, c:c + 1])

    def __eq__(self, other):
        if not isinstance(other, ImageRaster):
            return NotImplemented
        return np.array_equal(self.samples, other.samples)

    __hash__ = None


@dataclass(frozen=True)
class SeparableKernel2D:
    sx: Signal1D
    sy: Signal1D


def _to_lines(img, axis):
    """``(lines, extent)`` stack plus what is needed to undo it."""
    arr = img.samples
    if axis is Axis.Y:
        arr = arr.transpose(1, 0, 2)
    # arr is (other, extent, channels); lines are ordered (channel, other)
    other, extent, ch = arr.shape
    lines = np.ascontiguousarray(arr.transpose(2, 0, 1).reshape(ch * other, extent))
    return lines, (other, ch)


def _from_lines(lines, layout, axis):
    other, ch = layout
    arr = lines.reshape(ch, other, -1).transpose(1, 2, 0)
    if axis is Axis.Y:
        arr = arr.transpose(1, 0, 2)
    return ImageRaster(arr)


def _line_coords(index, layout, axis):
    other, _ = layout
    return index % other, index // other


def blur_axis(img, s, axis):
    """Convolve every line along ``axis`` with ``s``; that axis grows by ``len(s)-1``."""
    axis = Axis.parse(axis)
    lines, layout = _to_lines(img, axis)
    return _from_lines(kernels.convolve_rows(lines, s.values), layout, axis)


def _deblur_step(lines, s, factor):
    s0 = float(s.values[0])
    target = lines.shape[1] - len(s) + 1
    s_win = s.window(s.offset, s.offset + target)
    h_win = np.array(lines[:, :target], order="C")
    _, _, _, stop, bad = kernels.step_iterate(s_win, h_win, factor)
    if stop:
        raise Divergent(f"step iteration diverged at step {stop}", line=bad)
    return h_win / s0


def _deblur_doubling(lines, s, factor, n_steps=None):
    s0, sl, l = two_term(s)
    flipped = abs(sl) > abs(s0)
    if flipped:
        lines = lines[:, ::-1]
        s0, sl = sl, s0
    a = sl / s0
    target = lines.shape[1] - len(s) + 1
    if n_steps is None:
        n_steps = doubling_steps(target, l)
    h_win = np.array(lines[:, :target], order="C")
    coeff, span = -a, l
    for k in range(1, n_steps + 1):
        kernels.shift_add_rows(h_win, span, coeff)
        coeff = a * a if k == 1 else coeff * coeff
        if not math.isfinite(coeff) or abs(coeff) > factor:
            raise Divergent(f"doubling diverged at step {k} (|a|={abs(a):g})")
        span *= 2
    out = h_win / s0
    return out[:, ::-1] if flipped else out


def _deblur_combined(lines, s, L=None, C=None):
    M = lines.shape[1] - len(s) + 1
    if M < 1:
        raise IncompleteResponse(f"lines of length {lines.shape[1]} are shorter than the kernel")
    L = M + 1 if L is None else int(L)
    if L <= M:
        raise HalfWidthTooSmall(f"half-width L={L} must exceed the line length M={M}")
    comb = make_combination(s, L, C)
    return kernels.combine_rows(lines, comb.mu, L, comb.C, M)


def is_boxcar(s):
    return len(s) >= 2 and bool(np.all(s.values == s.values[0]))


def deblur_axis(img, s, axis, method="combined", *, L=None, C=None, steps=None,
                divergence_factor=1e6):
    """Undo a blur by ``s`` along ``axis``; that axis shrinks by ``len(s)-1``.

    ``method`` is ``"step"``, ``"modified"`` (two-term or boxcar kernels) or
    ``"combined"``. A line that diverges raises :class:`Divergent` carrying
    its ``line`` and ``channel`` coordinates.
    """
    axis = Axis.parse(axis)
    if s.is_zero():
        raise LeadingZeroKernel("kernel has no nonzero coefficient")
    if img.extent(axis) < len(s):
        raise IncompleteResponse(
            f"image extent {img.extent(axis)} along {axis.value} is shorter than the kernel")
    if method == "modified" and is_boxcar(s):
        restored, _ = motion_deblur_uniform(img, len(s), axis, coefficient=float(s.values[0]))
        return restored
    lines, layout = _to_lines(img, axis)
    try:
        if method == "step":
            out = _deblur_step(lines, s, divergence_factor)
        elif method == "modified":
            out = _deblur_doubling(lines, s, divergence_factor, steps)
        elif method == "combined":
            out = _deblur_combined(lines, s, L, C)
        else:
            raise UsageError(f"unknown method {method!r}")
    except Divergent as exc:
        if exc.line is not None:
            exc.line, exc.channel = _line_coords(exc.line, layout, axis)
            exc.args = (f"{exc.args[0]} (line {exc.line}, channel {exc.channel})",)
        raise
    return _from_lines(out, layout, axis)


def motion_deblur_uniform(img, l, axis, coefficient=None):
    """Remove a uniform-motion smear of ``l`` pixels along ``axis``.

    The boxcar ``c * (delta_0 + ... + delta_{l-1})`` (``c`` defaults to
    ``1/l``) is first reduced to ``c * (delta_0 - delta_l)`` by subtracting
    each line shifted by one, then the doubling iteration clears the
    surviving copy. Returns ``(image, steps_used)`` where ``steps_used``
    counts the differencing as the first step.
    """
    axis = Axis.parse(axis)
    l = int(l)
    if l < 2:
        raise KernelShape("uniform motion needs a boxcar of length >= 2")
    extent = img.extent(axis)
    if extent <= l:
        raise BlurWiderThanImage(f"boxcar of length {l} does not fit in extent {extent}")
    c = 1.0 / l if coefficient is None else float(coefficient)
    target = extent - l + 1
    lines, layout = _to_lines(img, axis)
    h_win = np.array(lines[:, :target], order="C")
    kernels.shift_add_rows(h_win, 1, -1.0)
    steps_used = 1
    # kernel is now c*(delta_0 - delta_l): a = -1, so every doubling factor is +1
    span = l
    while span < target:
        kernels.shift_add_rows(h_win, span, 1.0)
        span *= 2
        steps_used += 1
    return _from_lines(h_win / c, layout, axis), steps_used


def deblur_separable(img, k, order="xy", method="combined", **opts):
    """Restore an image blurred by ``sx`` along X and ``sy`` along Y.

    ``order="xy"`` undoes the X blur first (through the intermediate that is
    still blurred along Y), ``"yx"`` the other way round. Errors carry a
    ``stage`` attribute, ``"first"`` or ``"second"``.
    """
    if order not in ("xy", "yx"):
        raise UsageError(f"order must be 'xy' or 'yx', got {order!r}")
    plan = [(Axis.X, k.sx), (Axis.Y, k.sy)]
    if order == "yx":
        plan.reverse()
    out = img
    for stage, (axis, s) in zip(("first", "second"), plan):
        try:
            out = deblur_axis(out, s, axis, method, **opts)
        except DeconvolutionError as exc:
            exc.stage = stage
            raise
    return out


def make_gaussian_kernel(sigma, radius):
    """Samples of ``exp(-k**2 / (2 sigma**2))`` for ``k = -radius..radius``.

    Peak value is exactly 1; the kernel is not normalized to unit sum.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    radius = int(radius)
    if radius < 1 or radius < math.ceil(sigma):
        raise ValueError(f"radius must be >= max(1, ceil(sigma)), got {radius}")
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    return Signal1D(-radius, np.exp(-(k * k) / (2.0 * sigma * sigma)))


def make_boxcar_kernel(length, coefficient=None):
    """``length`` equal coefficients at offsets ``0..length-1`` (default ``1/length``)."""
    length = int(length)
    if length < 1:
        raise ValueError("boxcar length must be >= 1")
    c = 1.0 / length if coefficient is None else float(coefficient)
    return Signal1D(0, np.full(length, c))
