"""Combined shifts: one linear combination of ``2L+1`` shifted copies whose
effective kernel is a unit impulse with ``L`` zeros on either side.

Kernel indices ``C`` are local: ``0`` is the first stored coefficient of the
kernel.
"""

from dataclasses import dataclass
import csv
import re

import numpy as np

from . import kernels
from .errors import (BadCenter, FormatError, HalfWidthTooSmall,
                     IncompleteResponse, SingularShiftMatrix)
from .signals import Signal1D

PIVOT_TOL = 1e-12
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ShiftMatrix:
    """``entries[i, j] = s[C + j - i]`` (0-based here), zero off the kernel."""

    C: int
    L: int
    entries: np.ndarray

    @property
    def size(self):
        return 2 * self.L + 1


@dataclass(frozen=True, eq=False)
class ShiftCombination:
    """Coefficients ``mu[-L..L]`` (stored 0-based) solving ``mu @ Sigma = e``."""

    C: int
    L: int
    mu: np.ndarray
    e: np.ndarray

    def coefficient(self, i):
        return float(self.mu[i + self.L])


def default_center(S):
    """Index of the largest ``|s_k|``; ties go to the smallest index."""
    return int(np.argmax(np.abs(S.values)))


def build_shift_matrix(S, C, L):
    if L < 1:
        raise ValueError("half-width L must be >= 1")
    if not 0 <= C < len(S):
        raise BadCenter(f"center {C} outside kernel support 0..{len(S) - 1}")
    n = 2 * L + 1
    idx = C + np.arange(n)[None, :] - np.arange(n)[:, None]
    inside = (idx >= 0) & (idx < len(S))
    entries = np.where(inside, S.values[np.clip(idx, 0, len(S) - 1)], 0.0)
    return ShiftMatrix(C, L, entries)


def unit_target(L):
    e = np.zeros(2 * L + 1)
    e[L] = 1.0
    return e


def solve_coefficients(sigma, e):
    """Solve ``mu @ Sigma = e`` by pivoted elimination (no inverse formed)."""
    m = sigma.entries if isinstance(sigma, ShiftMatrix) else np.asarray(sigma, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    if e.shape != (m.shape[0],):
        raise ValueError(f"target vector must have length {m.shape[0]}")
    if not np.all(np.isfinite(e)):
        raise ValueError("target vector must be finite")
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        raise SingularShiftMatrix("shift matrix is identically zero")
    mu, min_pivot = kernels.solve_transposed(m, e)
    if min_pivot < PIVOT_TOL * scale:
        raise SingularShiftMatrix(
            f"pivot {min_pivot:.3g} below {PIVOT_TOL:g} * max|Sigma| ({scale:.3g})")
    residual = float(np.max(np.abs(mu @ m - e)))
    bound = RESIDUAL_TOL * (float(np.max(np.abs(e))) + float(np.max(np.abs(mu))) * scale)
    if not residual <= bound:
        raise SingularShiftMatrix(f"solve residual {residual:.3g} exceeds {bound:.3g}")
    return mu


def make_combination(S, L, C=None, e=None):
    C = default_center(S) if C is None else int(C)
    sigma = build_shift_matrix(S, C, L)
    e = unit_target(L) if e is None else np.asarray(e, dtype=np.float64)
    mu = solve_coefficients(sigma, e)
    mu.setflags(write=False)
    return ShiftCombination(C, L, mu, e.copy())


def apply_combination(H, comb):
    """``sum_i mu_i * H shifted by i`` for ``i = -L..L``; support grows by ``L``."""
    L = comb.L
    width = len(H) + 2 * L
    out = kernels.combine_rows(H.values[None, :], comb.mu, L, -L, width)[0]
    return Signal1D(H.offset - L, out)


def _implied_length(H, S):
    M = len(H) - len(S) + 1
    if M < 1:
        raise IncompleteResponse(
            f"response of length {len(H)} is shorter than the kernel ({len(S)})")
    return M


def _check_half_width(L, M):
    if L <= M:
        raise HalfWidthTooSmall(f"half-width L={L} must exceed the response length M={M}")


def combined_deconvolve(H, S, L=None, C=None):
    """Rebuild ``h`` from ``H = h * S`` with one combination of shifts.

    ``M = len(H) - len(S) + 1`` samples are returned. ``L`` defaults to
    ``M + 1`` and ``C`` to the position of the largest kernel magnitude.
    """
    M = _implied_length(H, S)
    L = M + 1 if L is None else int(L)
    _check_half_width(L, M)
    comb = make_combination(S, L, C)
    vals = kernels.combine_rows(H.values[None, :], comb.mu, L, comb.C, M)[0]
    return Signal1D(H.offset - S.offset, vals), comb


def remodel(H, S, L, C, target_e):
    """Re-express ``H`` as if it had been blurred by the kernel in ``target_e``.

    ``target_e[j]`` is the coefficient of the new kernel at relative position
    ``j - L`` (so the unit center vector means "no blur"). The result is
    ``h * T`` with ``T = Signal1D(-L, target_e)``, valid on relative indices
    ``M-1-L .. L`` where it is returned.
    """
    M = _implied_length(H, S)
    L = int(L)
    _check_half_width(L, M)
    C = default_center(S) if C is None else int(C)
    comb = make_combination(S, L, C, target_e)
    lo = M - 1 - L
    vals = kernels.combine_rows(H.values[None, :], comb.mu, L, C + lo, L - lo + 1)[0]
    return Signal1D(H.offset - S.offset + lo, vals)


def effective_kernel(S, comb):
    """``sum_i mu_i * S shifted by i``, in the kernel's local coordinates."""
    return apply_combination(Signal1D(0, S.values), comb)


_COMB_HEADER = re.compile(r"^# C=(-?\d+) L=(\d+)$")


def write_combination(path, comb):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# C={comb.C} L={comb.L}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("i", "mu_i", "e_i"))
        for i in range(-comb.L, comb.L + 1):
            w.writerow([i, repr(float(comb.mu[i + comb.L])), repr(float(comb.e[i + comb.L]))])


def read_combination(path):
    with open(path, encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\r\n")
        m = _COMB_HEADER.match(first)
        if not m:
            raise FormatError(f"{path}: first line must be '# C=<int> L=<int>'")
        C, L = int(m.group(1)), int(m.group(2))
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != ("i", "mu_i", "e_i") or len(rows) != 2 * L + 2:
        raise FormatError(f"{path}: expected header i,mu_i,e_i and {2 * L + 1} rows")
    try:
        idx = [int(r[0]) for r in rows[1:]]
        mu = np.array([float(r[1]) for r in rows[1:]])
        e = np.array([float(r[2]) for r in rows[1:]])
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: {exc}") from None
    if idx != list(range(-L, L + 1)):
        raise FormatError(f"{path}: rows must run i=-L..L in order")
    return ShiftCombination(C, L, mu, e)
