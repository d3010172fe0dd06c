"""The compiled and numpy backends must agree bit for bit."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from shiftdeconv import _pykernels, kernels

pytestmark = pytest.mark.skipif(
    "cython" not in kernels.available_backends(), reason="compiled kernels not built")

if "cython" in kernels.available_backends():
    from shiftdeconv import _ckernels
else:
    _ckernels = None

vals = st.floats(-5, 5, allow_nan=False, allow_infinity=False, width=64)


def rows(max_lines=4, max_len=30):
    return hnp.arrays(np.float64, st.tuples(st.integers(1, max_lines), st.integers(1, max_len)),
                      elements=vals)


@given(rows(), hnp.arrays(np.float64, st.integers(1, 9), elements=vals))
def test_convolve_rows(x, s):
    assert np.array_equal(_pykernels.convolve_rows(x, s), _ckernels.convolve_rows(x, s))


@given(rows(), st.integers(1, 40), vals)
def test_shift_add_rows(x, shift, coeff):
    a = _pykernels.shift_add_rows(x.copy(), shift, coeff)
    b = _ckernels.shift_add_rows(x.copy(), shift, coeff)
    assert np.array_equal(a, b)


@given(rows(max_len=25), st.data())
def test_step_iterate(h, data):
    width = h.shape[1]
    s = data.draw(hnp.arrays(np.float64, width, elements=vals))
    s[0] = data.draw(st.sampled_from([1.0, 0.5, -2.0, 0.1]))
    ra = _pykernels.step_iterate(s.copy(), h.copy(), 1e6)
    rb = _ckernels.step_iterate(s.copy(), h.copy(), 1e6)
    for a, b in zip(ra[:3], rb[:3]):
        assert np.array_equal(a, b, equal_nan=True)
    assert ra[3:] == rb[3:]


@given(rows(), st.integers(0, 6), st.integers(-8, 8), st.integers(0, 20), st.data())
def test_combine_rows(h, half, start, count, data):
    mu = data.draw(hnp.arrays(np.float64, 2 * half + 1, elements=vals))
    a = _pykernels.combine_rows(h, mu, half, start, count)
    b = _ckernels.combine_rows(h, mu, half, start, count)
    assert np.array_equal(a, b)


@given(st.integers(1, 12), st.data())
def test_solve_transposed(n, data):
    m = data.draw(hnp.arrays(np.float64, (n, n), elements=vals))
    e = data.draw(hnp.arrays(np.float64, n, elements=vals))
    mu_a, piv_a = _pykernels.solve_transposed(m, e)
    mu_b, piv_b = _ckernels.solve_transposed(m, e)
    assert piv_a == piv_b
    assert np.array_equal(mu_a, mu_b, equal_nan=True)


def test_backend_switch():
    previous = kernels.use_backend("python")
    try:
        assert kernels.backend() == "python"
        kernels.use_backend("cython")
        assert kernels.backend() == "cython"
        with pytest.raises(ValueError):
            kernels.use_backend("fortran")
    finally:
        kernels.use_backend(previous)
