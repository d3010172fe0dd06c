"""Slow ground truth for the tests.

Nothing here touches the shift iterations or the compiled kernels: the
deconvolution oracle builds the convolution matrix explicitly and solves
its normal equations with full pivoting, and the 2D convolution is the
four-fold loop straight from the definition.
"""

import numpy as np

from .errors import RankDeficient
from .image import ImageRaster
from .signals import Signal1D

RANK_TOL = 1e-13


def convolution_matrix(S, n_rows, M):
    """``A[p, m] = s[p - m]`` so that ``A @ h`` is ``h * S`` in local indices."""
    A = np.zeros((n_rows, M))
    for p in range(n_rows):
        for m in range(M):
            k = p - m
            if 0 <= k < len(S):
                A[p, m] = S.values[k]
    return A


def _solve_full_pivot(A, b):
    """Gaussian elimination with complete pivoting; raises on a tiny pivot."""
    A = np.array(A, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    n = A.shape[0]
    cols = list(range(n))
    scale = np.max(np.abs(A)) if A.size else 0.0
    for k in range(n):
        sub = np.abs(A[k:, k:])
        r, c = np.unravel_index(int(np.argmax(sub)), sub.shape)
        r += k
        c += k
        if sub.size == 0 or A[r, c] == 0.0 or abs(A[r, c]) < RANK_TOL * scale:
            raise RankDeficient(f"normal equations lose rank at column {k}")
        A[[k, r]] = A[[r, k]]
        b[[k, r]] = b[[r, k]]
        A[:, [k, c]] = A[:, [c, k]]
        cols[k], cols[c] = cols[c], cols[k]
        for i in range(k + 1, n):
            f = A[i, k] / A[k, k]
            A[i, k:] -= f * A[k, k:]
            b[i] -= f * b[k]
    y = np.zeros(n)
    for i in range(n - 1, -1, -1):
        y[i] = (b[i] - A[i, i + 1:] @ y[i + 1:]) / A[i, i]
    x = np.zeros(n)
    x[cols] = y
    return x


def dense_deconvolve(H, S, M):
    """Least-squares ``h`` of length ``M`` with ``h * S`` closest to ``H``."""
    if len(H) < len(S) + M - 1:
        raise ValueError("response too short for the requested length")
    A = convolution_matrix(S, len(H), M)
    x = _solve_full_pivot(A.T @ A, A.T @ H.values)
    return Signal1D(H.offset - S.offset, x)


def convolve_2d_naive(img, kernel2d):
    """Full 2D convolution; ``kernel2d[ky][kx]`` with rows along Y."""
    ker = np.asarray(kernel2d, dtype=np.float64)
    src = img.samples
    h, w, ch = src.shape
    kh, kw = ker.shape
    out = np.zeros((h + kh - 1, w + kw - 1, ch))
    for c in range(ch):
        for y in range(h):
            for x in range(w):
                v = src[y, x, c]
                for ky in range(kh):
                    for kx in range(kw):
                        out[y + ky, x + kx, c] += ker[ky, kx] * v
    return ImageRaster(out)
