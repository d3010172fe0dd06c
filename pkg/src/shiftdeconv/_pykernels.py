"""Pure numpy implementations of the hot loops.

Every routine here performs, element by element, exactly the same floating
point operations in the same order as its twin in ``_ckernels.pyx``, so the
two backends agree bit for bit. Keep them in sync.
"""

import numpy as np

BACKEND = "python"


def convolve_rows(x, s):
    """Full linear convolution of each row of ``x`` with ``s``.

    Output element ``p`` accumulates ``s[k] * x[p - k]`` for ascending ``k``.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    n, m = x.shape
    k_len = s.shape[0]
    out = np.zeros((n, m + k_len - 1))
    for k in range(k_len):
        out[:, k:k + m] += s[k] * x
    return out


def shift_add_rows(x, shift, coeff):
    """In place: ``x <- x + coeff * x shifted right by shift`` (old values)."""
    width = x.shape[1]
    if shift < width:
        x[:, shift:] = x[:, shift:] + coeff * x[:, :width - shift]
    return x


def step_iterate(s, h, factor):
    """Step-by-step cancellation on a truncated window.

    ``s`` (T,) and ``h`` (lines, T) are modified in place. Step ``n`` uses
    ``a_n = s[n] / s[0]`` and subtracts the copy shifted by ``n``.

    Returns ``(a, max_s, max_h, stop, bad_line)`` where ``stop`` is the step
    at which the stop rule fired (0 if it never did).
    """
    width = s.shape[0]
    nsteps = max(width - 1, 0)
    a_out = np.zeros(nsteps)
    max_s = np.zeros(nsteps)
    max_h = np.zeros(nsteps)
    limit = factor * np.max(np.abs(h), axis=1)
    s0 = s[0]
    for n in range(1, width):
        a = s[n] / s0
        a_out[n - 1] = a
        if a != 0.0:
            s[n:] = s[n:] - a * s[:width - n]
            h[:, n:] = h[:, n:] - a * h[:, :width - n]
        max_s[n - 1] = np.max(np.abs(s))
        row_max = np.max(np.abs(h), axis=1)
        max_h[n - 1] = row_max[0]
        if not np.isfinite(a):
            return a_out[:n], max_s[:n], max_h[:n], n, 0
        bad = np.nonzero((row_max > limit) | ~np.isfinite(row_max))[0]
        if bad.size:
            return a_out[:n], max_s[:n], max_h[:n], n, int(bad[0])
    return a_out, max_s, max_h, 0, -1


def combine_rows(h, mu, half, start, count):
    """Weighted sum of shifted copies of each row.

    ``out[:, t] = sum_{i=-half..half} mu[i + half] * h[:, start + t - i]``,
    accumulated in ascending ``i``; indices outside a row read as zero.
    """
    h = np.ascontiguousarray(h, dtype=np.float64)
    n, m = h.shape
    pad = np.zeros((n, m + 2 * (count + abs(start) + 2 * half + 1)))
    base = count + abs(start) + half
    pad[:, base:base + m] = h
    out = np.zeros((n, count))
    for i in range(-half, half + 1):
        lo = base + start - i
        out += mu[i + half] * pad[:, lo:lo + count]
    return out


def solve_transposed(sigma, e):
    """Solve ``mu @ sigma = e`` by row-pivoted elimination on ``sigma.T``.

    Returns ``(mu, min_pivot)``; ``min_pivot`` is the smallest absolute pivot
    met. Elimination stops at the first zero pivot and reports it.
    """
    a = np.array(sigma, dtype=np.float64).T.copy()
    b = np.array(e, dtype=np.float64).copy()
    n = a.shape[0]
    min_pivot = np.inf
    for col in range(n):
        p = col + int(np.argmax(np.abs(a[col:, col])))
        piv = abs(a[p, col])
        if piv < min_pivot:
            min_pivot = piv
        if piv == 0.0:
            return np.full(n, np.nan), 0.0
        if p != col:
            a[[col, p]] = a[[p, col]]
            b[col], b[p] = b[p], b[col]
        f = a[col + 1:, col] / a[col, col]
        a[col + 1:, col:] = a[col + 1:, col:] - np.outer(f, a[col, col:])
        b[col + 1:] = b[col + 1:] - f * b[col]
    x = b
    # tiny pivots may overflow to inf, as in the compiled kernel; callers check
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(n - 1, -1, -1):
            x[j] = x[j] / a[j, j]
            x[:j] = x[:j] - a[:j, j] * x[j]
    return x, min_pivot
