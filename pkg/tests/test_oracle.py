import numpy as np
import pytest

from shiftdeconv import Signal1D, convolve, max_abs_error
from shiftdeconv.errors import RankDeficient
from shiftdeconv.image import ImageRaster, blur_axis
from shiftdeconv.oracle import convolution_matrix, convolve_2d_naive, dense_deconvolve


def test_convolution_matrix_product(rng):
    S = Signal1D(0, [0.5, 1.0, 0.25])
    h = rng.random(4)
    A = convolution_matrix(S, 6, 4)
    assert np.allclose(A @ h, np.convolve(h, S.values), atol=1e-15)


def test_dense_recovers_hand_case():
    H = Signal1D(0, [1.0, 2.5, 1.0])
    est = dense_deconvolve(H, Signal1D(0, [1.0, 0.5]), 2)
    assert max_abs_error(est, Signal1D(0, [1.0, 2.0])) <= 1e-12


def test_dense_offsets(rng):
    S = Signal1D(-2, [0.2, 1.0, 0.4])
    h = Signal1D(3, rng.random(5) + 0.1)
    est = dense_deconvolve(convolve(h, S), S, 5)
    assert est.offset == 3
    assert max_abs_error(est, h) <= 1e-10


def test_dense_least_squares(rng):
    S = Signal1D(0, [1.0, 0.3])
    h = rng.random(6) + 0.1
    H = convolve(Signal1D(0, h), S)
    noisy = Signal1D(0, H.values + 1e-3 * rng.standard_normal(len(H)))
    est = dense_deconvolve(noisy, S, 6)
    ref = np.linalg.lstsq(convolution_matrix(S, len(H), 6), noisy.values, rcond=None)[0]
    assert np.allclose(est.values, ref, atol=1e-12)


def test_rank_deficient():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    from shiftdeconv.oracle import _solve_full_pivot
    with pytest.raises(RankDeficient):
        _solve_full_pivot(A, np.ones(2))


def test_short_response():
    with pytest.raises(ValueError):
        dense_deconvolve(Signal1D(0, [1.0, 1.0]), Signal1D(0, [1.0, 1.0]), 3)


def test_naive_2d_example():
    out = convolve_2d_naive(ImageRaster(np.ones((2, 2))), np.ones((2, 2)))
    assert out.samples[:, :, 0].tolist() == [[1, 2, 1], [2, 4, 2], [1, 2, 1]]


def test_naive_2d_separable(rng):
    img = ImageRaster(rng.random((6, 7, 3)))
    sx = Signal1D(0, [1.0, 0.5, 0.25])
    sy = Signal1D(0, [0.3, 1.0])
    ref = convolve_2d_naive(img, np.outer(sy.values, sx.values))
    out = blur_axis(blur_axis(img, sx, "x"), sy, "y")
    assert np.max(np.abs(ref.samples - out.samples)) <= 1e-10


@pytest.mark.parametrize("H, S, expected", [
    ([1, 2.5, 4, 1.5], [1, 0.5], [1, 2, 3]),
    ([2, 4, 6], [2], [1, 2, 3]),
])
def test_dense_examples(H, S, expected):
    est = dense_deconvolve(Signal1D(0, H), Signal1D(0, S), len(expected))
    assert max_abs_error(est, Signal1D(0, expected)) <= 1e-12


def test_dense_self_consistency(rng):
    for _ in range(50):
        S = Signal1D(0, rng.uniform(0.05, 1.0, rng.integers(1, 8)))
        h = Signal1D(0, rng.uniform(0.1, 1.0, rng.integers(1, 8)))
        assert max_abs_error(dense_deconvolve(convolve(h, S), S, len(h)), h) <= 1e-10


def test_naive_2d_identity(rng):
    img = ImageRaster(rng.random((3, 4, 3)))
    assert convolve_2d_naive(img, [[1.0]]) == img


def test_naive_2d_separable_8x8(rng):
    img = ImageRaster(rng.random((8, 8, 1)))
    sx, sy = Signal1D(0, rng.random(3) + 0.1), Signal1D(0, rng.random(4) + 0.1)
    ref = convolve_2d_naive(img, np.outer(sy.values, sx.values))
    out = blur_axis(blur_axis(img, sx, "x"), sy, "y")
    assert np.max(np.abs(ref.samples - out.samples)) <= 1e-10
