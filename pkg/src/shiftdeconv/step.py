"""Step-by-step shift iteration, the doubling variant for two-term kernels,
the mirror trick for kernels whose dominant term comes last, and the
divergence-horizon estimate.

All iterations run on a truncated window: index ``i`` of an iterate only ever
depends on indices ``<= i`` of the previous one, so restricting the arrays to
the prefix being rebuilt changes nothing in that prefix.
"""

from dataclasses import dataclass, field
import csv
import math

import numpy as np

from . import kernels
from .errors import Divergent, FormatError, KernelShape, LeadingZeroKernel
from .signals import Signal1D, mirror


@dataclass(frozen=True)
class StepRecord:
    n: int
    a_n: float
    max_abs_S: float
    max_abs_H: float


@dataclass
class IterationTrace:
    steps: list = field(default_factory=list)
    diverged: bool = False
    reconstructed_len: int = 0

    def coefficients(self):
        return np.array([r.a_n for r in self.steps])


@dataclass(frozen=True)
class StepOptions:
    """``target_len=None`` rebuilds as many samples as the response holds."""

    target_len: int | None = None
    divergence_factor: float = 1e6
    normalize: bool = True

    def __post_init__(self):
        if self.target_len is not None and int(self.target_len) < 1:
            raise ValueError("target_len must be >= 1")
        f = self.divergence_factor
        if not (math.isfinite(f) and f > 1.0):
            raise ValueError("divergence_factor must be finite and > 1")


def _leading(S):
    if S.is_zero():
        raise LeadingZeroKernel("kernel has no nonzero coefficient")
    return float(S.values[0])


def step_by_step(H, S, opts=None):
    """Rebuild the impulse response by cancelling kernel terms one at a time.

    Step ``n`` uses ``a_n = s[n] / s[0]`` taken from the current kernel iterate
    and subtracts ``a_n`` times the kernel and the response shifted right by
    ``n``. After ``n`` steps samples ``0..n`` of the response iterate equal
    ``s[0] * h``.

    Returns ``(h, trace)``. If the stop rule fires at step ``n > 1`` the
    ``n`` samples confirmed so far are returned and ``trace.diverged`` is set;
    at step 1 :class:`Divergent` is raised.
    """
    opts = opts or StepOptions()
    s0 = _leading(S)
    target = int(opts.target_len or len(H))
    h_origin = H.offset - S.offset
    s_win = S.window(S.offset, S.offset + target)
    h_win = H.window(H.offset, H.offset + target)[None, :].copy()
    a, max_s, max_h, stop, _ = kernels.step_iterate(s_win, h_win, opts.divergence_factor)
    trace = IterationTrace(
        steps=[StepRecord(i + 1, float(a[i]), float(max_s[i]), float(max_h[i]))
               for i in range(len(a))],
    )
    if stop:
        trace.diverged = True
        trace.reconstructed_len = stop
        if stop == 1:
            raise Divergent("iteration diverged at step 1", trace=trace)
        kept = h_win[0, :stop]
    else:
        trace.reconstructed_len = target
        kept = h_win[0]
    if opts.normalize:
        kept = kept / s0
    return Signal1D(h_origin, kept), trace


def step_state(H, S, n_steps):
    """Kernel and response iterates after ``n_steps`` steps, full support.

    Unnormalized and untruncated; meant for inspecting the iteration.
    """
    _leading(S)
    grow = n_steps * (n_steps + 1) // 2
    s_win = S.window(S.offset, S.offset + len(S) + grow)
    h_win = H.window(H.offset, H.offset + len(H) + grow)
    for n in range(1, n_steps + 1):
        a = s_win[n] / s_win[0]
        if a != 0.0:
            kernels.shift_add_rows(s_win[None, :], n, -a)
            kernels.shift_add_rows(h_win[None, :], n, -a)
    return Signal1D(S.offset, s_win), Signal1D(H.offset, h_win)


def two_term(S):
    """``(s0, s_l, l)`` for a kernel with exactly two nonzero terms."""
    nz = np.flatnonzero(S.values)
    if nz.size != 2:
        raise KernelShape(f"expected a two-term kernel, got {nz.size} nonzero terms")
    return float(S.values[nz[0]]), float(S.values[nz[1]]), int(nz[1] - nz[0])


def doubling_steps(length, l):
    """Doubling steps needed so the surviving term lands past ``length``."""
    if length <= l:
        return 1
    return max(1, math.ceil(math.log2(length / l)))


def modified_doubling(H, S, n_steps=None, *, target_len=None,
                      divergence_factor=1e6, normalize=True):
    """Doubling variant for ``S = s0*delta_0 + s_l*delta_l``.

    With ``a = s_l / s0``: step 1 subtracts ``a`` times the copies shifted by
    ``l``; step ``k > 1`` adds ``a**(2**(k-1))`` times the copies shifted by
    ``2**(k-1) * l``. After ``k`` steps the kernel is
    ``s0 * (delta_0 - a**(2**k) * delta_{2**k * l})``; ``trace.steps[k-1].a_n``
    holds that surviving coefficient ``a**(2**k)``.

    ``target_len`` defaults to the implied length of ``h``, ``n_steps`` to the
    smallest count that pushes the surviving term past it.
    """
    s0, sl, l = two_term(S)
    a = sl / s0
    target = int(target_len or max(len(H) - len(S) + 1, 1))
    if n_steps is None:
        n_steps = doubling_steps(target, l)
    h_origin = H.offset - S.offset
    s_win = S.window(S.offset, S.offset + max(target, l + 1))[None, :].copy()
    h_win = H.window(H.offset, H.offset + target)[None, :].copy()
    limit = divergence_factor * float(np.max(np.abs(h_win)))
    trace = IterationTrace()
    coeff = -a
    span = l
    for k in range(1, n_steps + 1):
        kernels.shift_add_rows(s_win, span, coeff)
        kernels.shift_add_rows(h_win, span, coeff)
        surviving = a * a if k == 1 else coeff * coeff
        peak_h = float(np.max(np.abs(h_win)))
        trace.steps.append(StepRecord(k, surviving, float(np.max(np.abs(s_win))), peak_h))
        if not math.isfinite(surviving) or abs(surviving) > divergence_factor or peak_h > limit:
            trace.diverged = True
            trace.reconstructed_len = min(span, target)
            raise Divergent(f"doubling diverged at step {k} (|a|={abs(a):g})", trace=trace)
        coeff = surviving
        span *= 2
    trace.reconstructed_len = min(span, target)
    out = h_win[0] / s0 if normalize else h_win[0]
    return Signal1D(h_origin, out), trace


def flip_to_dominant(H, S):
    """Mirror a two-term problem when the later term dominates.

    Returns ``(H', S', flipped)``. After deconvolving ``H'`` by ``S'`` the
    caller applies :func:`~shiftdeconv.signals.mirror` to the estimate when
    ``flipped`` is true.
    """
    s0, sl, _ = two_term(S)
    if abs(sl) > abs(s0):
        return mirror(H), mirror(S), True
    return H, S, False


def estimate_m_max(s_max_over_s0, l, ln_Nmax):
    """Number of samples rebuildable before coefficient growth overflows.

    ``l * ln_Nmax / ln(s_max / s0)``; infinite when the ratio is at most 1.
    """
    if s_max_over_s0 <= 1.0:
        return math.inf
    return l * ln_Nmax / math.log(s_max_over_s0)


TRACE_COLUMNS = ("n", "a_n", "max_abs_S", "max_abs_H")


def write_trace(path, trace):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in trace.steps:
            w.writerow([r.n, repr(r.a_n), repr(r.max_abs_S), repr(r.max_abs_H)])


def read_trace(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRACE_COLUMNS:
        raise FormatError(f"{path}: expected header {','.join(TRACE_COLUMNS)}")
    try:
        steps = [StepRecord(int(r[0]), float(r[1]), float(r[2]), float(r[3])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: {exc}") from None
    return IterationTrace(steps=steps, reconstructed_len=0)
