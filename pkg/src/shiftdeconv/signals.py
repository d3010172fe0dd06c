"""Finitely supported discrete signals and the arithmetic the shift methods use.

A :class:`Signal1D` is a run of real samples starting at a signed integer
offset; everything outside the run is zero. Kernels, impulse responses,
observed responses and every intermediate iterate are signals.
"""

from dataclasses import dataclass
import math
import os

import numpy as np

from . import kernels
from .errors import FormatError


def _as_values(values):
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ValueError("a signal needs at least one value")
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal values must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class Signal1D:
    """Real sequence ``values`` whose first entry sits at index ``offset``.

    Construction trims exact-zero samples from both ends; the all-zero signal
    is stored as a single ``0.0`` at index 0.
    """

    offset: int
    values: np.ndarray

    def __post_init__(self):
        vals = _as_values(self.values)
        nz = np.flatnonzero(vals)
        off = int(self.offset)
        if nz.size == 0:
            off = 0
            vals = np.zeros(1)
        else:
            off += int(nz[0])
            vals = vals[nz[0]:nz[-1] + 1].copy()
        vals.setflags(write=False)
        object.__setattr__(self, "offset", off)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_values(cls, values, offset=0):
        return cls(offset, values)

    def __len__(self):
        return self.values.shape[0]

    @property
    def stop(self):
        """One past the last stored index."""
        return self.offset + len(self)

    def is_zero(self):
        return len(self) == 1 and self.values[0] == 0.0

    def window(self, lo, hi):
        """Dense copy of indices ``lo..hi-1``; absent samples read as zero."""
        out = np.zeros(max(hi - lo, 0))
        a = max(lo, self.offset)
        b = min(hi, self.stop)
        if b > a:
            out[a - lo:b - lo] = self.values[a - self.offset:b - self.offset]
        return out

    def __getitem__(self, index):
        i = index - self.offset
        if 0 <= i < len(self):
            return float(self.values[i])
        return 0.0

    def __eq__(self, other):
        if not isinstance(other, Signal1D):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self):
        return f"Signal1D({self.values.tolist()!r}@{self.offset})"


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise, ``level`` times the peak magnitude, seeded."""

    level: float
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.level < 1.0) or not math.isfinite(self.level):
            raise ValueError(f"noise level must lie in [0, 1), got {self.level}")
        if int(self.seed) < 0:
            raise ValueError("noise seed must be non-negative")


def convolve(h, s):
    """Full linear convolution; output offset is the sum of input offsets."""
    out = kernels.convolve_rows(h.values[None, :], s.values)[0]
    return Signal1D(h.offset + s.offset, out)


def shift(x, l):
    """Move ``x`` right by ``l`` intervals (left for negative ``l``)."""
    return Signal1D(x.offset + int(l), x.values)


def mirror(x):
    """Reflect about index zero: sample ``k`` moves to ``-k``."""
    return Signal1D(-(x.stop - 1), x.values[::-1])


def axpy(x, alpha, y):
    """``x + alpha * y`` over the union of supports."""
    lo = min(x.offset, y.offset)
    hi = max(x.stop, y.stop)
    return Signal1D(lo, x.window(lo, hi) + alpha * y.window(lo, hi))


def max_abs_error(a, b, window=None):
    """Largest ``|a_i - b_i|``; missing samples count as zero.

    ``window`` is an inclusive ``(lo, hi)`` index pair; by default the union
    of both supports is scanned.
    """
    if window is None:
        lo, hi = min(a.offset, b.offset), max(a.stop, b.stop) - 1
    else:
        lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ValueError(f"empty comparison window [{lo}, {hi}]")
    diff = a.window(lo, hi + 1) - b.window(lo, hi + 1)
    return float(np.max(np.abs(diff)))


def add_noise(h, spec):
    """Perturb every stored sample by seeded zero-mean Gaussian noise."""
    if spec.level == 0.0:
        return h
    sigma = spec.level * float(np.max(np.abs(h.values)))
    rng = np.random.default_rng(spec.seed)
    return Signal1D(h.offset, h.values + sigma * rng.standard_normal(len(h)))


# -- file format ---------------------------------------------------------------

_HEADER = "# offset="


def format_signal(x):
    lines = [f"{_HEADER}{x.offset}"]
    lines.extend(repr(float(v)) for v in x.values)
    return "\n".join(lines) + "\n"


def parse_signal(text, source="<string>"):
    lines = text.splitlines()
    if not lines or not lines[0].startswith(_HEADER):
        raise FormatError(f"{source}: first line must be '{_HEADER}<int>'")
    try:
        offset = int(lines[0][len(_HEADER):].strip(), 10)
    except ValueError:
        raise FormatError(f"{source}: bad offset header {lines[0]!r}") from None
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise FormatError(f"{source}:{lineno}: not a number: {line!r}") from None
    if not values:
        raise FormatError(f"{source}: no values")
    if not all(math.isfinite(v) for v in values):
        raise FormatError(f"{source}: non-finite value")
    return Signal1D(offset, values)


def write_signal(path, x):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_signal(x))


def read_signal(path):
    with open(path, encoding="utf-8") as fh:
        return parse_signal(fh.read(), source=os.fspath(path))
