# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the routines in ``_pykernels``.

Same arithmetic, same order; see that module for the contracts.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, isfinite, INFINITY

cnp.import_array()

BACKEND = "cython"


def convolve_rows(x, s):
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], m = xv.shape[1], kl = sv.shape[0]
    cdef Py_ssize_t r, p, k, klo, khi
    cdef double acc
    out = np.zeros((n, m + kl - 1))
    cdef double[:, ::1] ov = out
    for r in range(n):
        for p in range(m + kl - 1):
            klo = p - m + 1
            if klo < 0:
                klo = 0
            khi = p
            if khi > kl - 1:
                khi = kl - 1
            acc = 0.0
            for k in range(klo, khi + 1):
                acc = acc + sv[k] * xv[r, p - k]
            ov[r, p] = acc
    return out


def shift_add_rows(x, Py_ssize_t shift, double coeff):
    cdef double[:, ::1] xv = x
    cdef Py_ssize_t n = xv.shape[0], w = xv.shape[1], r, i
    for r in range(n):
        i = w - 1
        while i >= shift:
            xv[r, i] = xv[r, i] + coeff * xv[r, i - shift]
            i -= 1
    return x


def step_iterate(s, h, double factor):
    cdef double[::1] sv = s
    cdef double[:, ::1] hv = h
    cdef Py_ssize_t w = sv.shape[0], lines = hv.shape[0]
    cdef Py_ssize_t nsteps = w - 1 if w > 1 else 0
    cdef Py_ssize_t n, i, r, bad
    cdef double a, s0 = sv[0], m, v
    a_out = np.zeros(nsteps)
    max_s = np.zeros(nsteps)
    max_h = np.zeros(nsteps)
    cdef double[::1] av = a_out, msv = max_s, mhv = max_h
    limit_arr = np.zeros(lines)
    cdef double[::1] limit = limit_arr
    for r in range(lines):
        m = 0.0
        for i in range(w):
            v = fabs(hv[r, i])
            if v > m:
                m = v
        limit[r] = factor * m
    for n in range(1, w):
        a = sv[n] / s0
        av[n - 1] = a
        if a != 0.0:
            i = w - 1
            while i >= n:
                sv[i] = sv[i] - a * sv[i - n]
                i -= 1
            for r in range(lines):
                i = w - 1
                while i >= n:
                    hv[r, i] = hv[r, i] - a * hv[r, i - n]
                    i -= 1
        m = 0.0
        for i in range(w):
            v = fabs(sv[i])
            if v > m or v != v:
                m = v
        msv[n - 1] = m
        bad = -1
        for r in range(lines):
            m = 0.0
            for i in range(w):
                v = fabs(hv[r, i])
                if v > m or v != v:
                    m = v
            if r == 0:
                mhv[n - 1] = m
            if bad < 0 and (m > limit[r] or not isfinite(m)):
                bad = r
        if not isfinite(a):
            return a_out[:n], max_s[:n], max_h[:n], n, 0
        if bad >= 0:
            return a_out[:n], max_s[:n], max_h[:n], n, bad
    return a_out, max_s, max_h, 0, -1


def combine_rows(h, mu, Py_ssize_t half, Py_ssize_t start, Py_ssize_t count):
    cdef const double[:, ::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[::1] muv = np.ascontiguousarray(mu, dtype=np.float64)
    cdef Py_ssize_t n = hv.shape[0], m = hv.shape[1], r, t, i, q
    cdef double acc, x
    out = np.zeros((n, count))
    cdef double[:, ::1] ov = out
    for r in range(n):
        for t in range(count):
            acc = 0.0
            for i in range(-half, half + 1):
                q = start + t - i
                if 0 <= q < m:
                    x = hv[r, q]
                else:
                    x = 0.0
                acc = acc + muv[i + half] * x
            ov[r, t] = acc
    return out


def solve_transposed(sigma, e):
    a_arr = np.array(sigma, dtype=np.float64).T.copy()
    x_arr = np.array(e, dtype=np.float64).copy()
    cdef double[:, ::1] a = a_arr
    cdef double[::1] b = x_arr
    cdef Py_ssize_t n = a.shape[0], col, p, r, c, j
    cdef double piv, best, f, tmp, min_pivot = INFINITY
    for col in range(n):
        p = col
        best = fabs(a[col, col])
        for r in range(col + 1, n):
            if fabs(a[r, col]) > best:
                best = fabs(a[r, col])
                p = r
        piv = best
        if piv < min_pivot:
            min_pivot = piv
        if piv == 0.0:
            return np.full(n, np.nan), 0.0
        if p != col:
            for c in range(n):
                tmp = a[col, c]
                a[col, c] = a[p, c]
                a[p, c] = tmp
            tmp = b[col]
            b[col] = b[p]
            b[p] = tmp
        for r in range(col + 1, n):
            f = a[r, col] / a[col, col]
            for c in range(col, n):
                a[r, c] = a[r, c] - f * a[col, c]
            b[r] = b[r] - f * b[col]
    j = n - 1
    while j >= 0:
        b[j] = b[j] / a[j, j]
        for r in range(j):
            b[r] = b[r] - a[r, j] * b[j]
        j -= 1
    return x_arr, min_pivot
