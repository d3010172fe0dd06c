import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shiftdeconv import Signal1D
from shiftdeconv.errors import (BlurWiderThanImage, Divergent, IncompleteResponse,
                                KernelShape, UsageError)
from shiftdeconv.image import (Axis, ImageRaster, SeparableKernel2D, blur_axis,
                               deblur_axis, deblur_separable, make_boxcar_kernel,
                               make_gaussian_kernel, motion_deblur_uniform)


def img_of(arr):
    return ImageRaster(np.asarray(arr, dtype=float))


def random_image(rng, h, w, c=1):
    return ImageRaster(rng.random((h, w, c)))


def max_diff(a, b):
    return float(np.max(np.abs(a.samples - b.samples)))


class TestRaster:
    def test_shape_checks(self):
        with pytest.raises(ValueError):
            ImageRaster(np.zeros((2, 2, 2)))
        with pytest.raises(ValueError):
            ImageRaster(np.full((2, 2), np.nan))
        img = ImageRaster(np.zeros((3, 4)))
        assert (img.height, img.width, img.channels) == (3, 4, 1)
        assert img.extent("x") == 4 and img.extent(Axis.Y) == 3

    def test_axis_parse(self):
        assert Axis.parse("X") is Axis.X
        with pytest.raises(UsageError, match="rotate"):
            Axis.parse("diagonal")


class TestBlur:
    def test_row_example(self):
        out = blur_axis(img_of([[1, 0, 0]]), Signal1D(0, [1, 0.5]), "x")
        assert out.samples[:, :, 0].tolist() == [[1, 0.5, 0, 0]]

    def test_column_example(self):
        out = blur_axis(img_of([[1], [2]]), Signal1D(0, [1, 1]), "y")
        assert out.samples[:, :, 0].tolist() == [[1], [3], [2]]

    def test_axes_commute(self, rng):
        img = random_image(rng, 7, 9, 3)
        sx, sy = Signal1D(0, [1, 0.4, 0.2]), Signal1D(0, [0.3, 1, 0.5, 0.1])
        a = blur_axis(blur_axis(img, sx, "x"), sy, "y")
        b = blur_axis(blur_axis(img, sy, "y"), sx, "x")
        assert max_diff(a, b) <= 1e-12

    def test_lines_independent(self, rng):
        img = random_image(rng, 5, 8, 3)
        s = Signal1D(0, [1, -0.3, 0.2])
        out = blur_axis(img, s, "x")
        for c in range(3):
            for y in range(5):
                row = np.convolve(img.samples[y, :, c], s.values)
                assert np.allclose(out.samples[y, :, c], row, atol=1e-14)

    def test_channel_independence(self, rng):
        img = random_image(rng, 4, 6, 3)
        s = Signal1D(0, [0.5, 1, 0.25])
        whole = blur_axis(img, s, "y")
        for c in range(3):
            assert blur_axis(img.channel(c), s, "y") == whole.channel(c)


class TestDeblurAxis:
    @pytest.mark.parametrize("method", ["step", "combined"])
    @pytest.mark.parametrize("axis", ["x", "y"])
    def test_round_trip(self, rng, method, axis):
        img = random_image(rng, 10, 12, 3)
        s = Signal1D(0, [1, 0.6, 0.4, 0.3])
        back = deblur_axis(blur_axis(img, s, axis), s, axis, method)
        assert max_diff(back, img) <= 1e-9

    def test_two_term_doubling(self, rng):
        img = random_image(rng, 6, 40, 1)
        s = Signal1D(0, [1, 0.5])
        back = deblur_axis(blur_axis(img, s, "x"), s, "x", "modified")
        assert max_diff(back, img) <= 1e-9

    def test_doubling_flips_for_dominant_trailing(self, rng):
        img = random_image(rng, 6, 40, 1)
        s = Signal1D(0, [0.5, 1])
        back = deblur_axis(blur_axis(img, s, "x"), s, "x", "modified")
        assert max_diff(back, img) <= 1e-9

    def test_dominant_kernel_color(self, rng):
        img = random_image(rng, 79, 100, 3)
        s = Signal1D(0, [1, 0.6, 0.4, 0.3, 0.2, 0.1])
        back = deblur_axis(blur_axis(img, s, "x"), s, "x", "step")
        assert max_diff(back, img) <= 1e-10

    @pytest.mark.parametrize("method", ["step", "modified", "combined"])
    def test_channel_independence(self, rng, method):
        s = Signal1D(0, [1, 0.5]) if method == "modified" else Signal1D(0, [1, 0.4, 0.2])
        blurred = blur_axis(random_image(rng, 6, 20, 3), s, "x")
        whole = deblur_axis(blurred, s, "x", method)
        for c in range(3):
            assert deblur_axis(blurred.channel(c), s, "x", method) == whole.channel(c)

    @pytest.mark.parametrize("method", ["step", "combined"])
    def test_line_independence(self, rng, method):
        s = Signal1D(0, [1, 0.4, 0.2])
        blurred = blur_axis(random_image(rng, 9, 15, 3), s, "x")
        perm = rng.permutation(9)
        direct = deblur_axis(blurred, s, "x", method)
        permuted = deblur_axis(ImageRaster(blurred.samples[perm]), s, "x", method)
        assert np.array_equal(permuted.samples[np.argsort(perm)], direct.samples)

    def test_divergence_reports_line(self, rng):
        img = random_image(rng, 4, 30, 1)
        s = Signal1D(0, [0.01, 0, 1.0, 0.5])
        with pytest.raises(Divergent) as info:
            deblur_axis(blur_axis(img, s, "x"), s, "x", "step")
        assert info.value.line is not None and info.value.channel == 0

    def test_kernel_too_long(self):
        with pytest.raises(IncompleteResponse):
            deblur_axis(img_of(np.ones((2, 3))), Signal1D(0, [1, 1, 1, 1]), "x")

    def test_unknown_method(self):
        with pytest.raises(UsageError):
            deblur_axis(img_of(np.ones((2, 5))), Signal1D(0, [1, 0.5]), "x", "fourier")

    def test_boxcar_routes_to_motion(self, rng):
        img = random_image(rng, 3, 50, 1)
        s = make_boxcar_kernel(7)
        back = deblur_axis(blur_axis(img, s, "x"), s, "x", "modified")
        assert max_diff(back, img) <= 1e-9


class TestMotion:
    def test_hand_case(self):
        blurred = img_of([[0.5, 1.0, 0.5]])
        out, steps = motion_deblur_uniform(blurred, 2, "x")
        assert out.samples[0, :, 0].tolist() == [1.0, 1.0]
        assert steps == 1

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_two_pixel_case(self, a, b):
        out, _ = motion_deblur_uniform(img_of([[a / 2, (a + b) / 2, b / 2]]), 2, "x")
        assert np.allclose(out.samples[0, :, 0], [a, b], atol=1e-15)

    @pytest.mark.parametrize("l", [2, 5, 20])
    @pytest.mark.parametrize("axis", ["x", "y"])
    def test_round_trip(self, rng, l, axis):
        img = random_image(rng, 24, 32, 3)
        blurred = blur_axis(img, make_boxcar_kernel(l), axis)
        out, _ = motion_deblur_uniform(blurred, l, axis)
        assert max_diff(out, img) <= 1e-9

    def test_step_count(self, rng):
        img = random_image(rng, 4, 100, 1)
        blurred = blur_axis(img, make_boxcar_kernel(20), "x")
        out, steps = motion_deblur_uniform(blurred, 20, "x")
        assert steps == 4
        assert max_diff(out, img) <= 1e-9

    @given(st.integers(2, 12), st.integers(2, 70))
    def test_steps_formula(self, l, width):
        img = ImageRaster(np.ones((1, width)))
        blurred = blur_axis(img, make_boxcar_kernel(l), "x")
        _, steps = motion_deblur_uniform(blurred, l, "x")
        expected = 1 + max(0, math.ceil(math.log2(width / l))) if width > l else 1
        assert steps == expected

    def test_custom_coefficient(self, rng):
        img = random_image(rng, 2, 30, 1)
        s = make_boxcar_kernel(4, coefficient=1.0)
        out, _ = motion_deblur_uniform(blur_axis(img, s, "x"), 4, "x", coefficient=1.0)
        assert max_diff(out, img) <= 1e-9

    def test_too_wide(self):
        with pytest.raises(BlurWiderThanImage):
            motion_deblur_uniform(img_of(np.ones((2, 5))), 5, "x")
        with pytest.raises(KernelShape):
            motion_deblur_uniform(img_of(np.ones((2, 5))), 1, "x")


class TestSeparable:
    def test_orders_agree(self, rng):
        img = random_image(rng, 20, 24, 3)
        k = SeparableKernel2D(make_gaussian_kernel(1.5, 4), make_gaussian_kernel(1.0, 3))
        blurred = blur_axis(blur_axis(img, k.sx, "x"), k.sy, "y")
        a = deblur_separable(blurred, k, "xy")
        b = deblur_separable(blurred, k, "yx")
        assert max_diff(a, img) <= 1e-9 and max_diff(a, b) <= 1e-9

    def test_stage_reported(self, rng):
        img = random_image(rng, 40, 30, 1)
        k = SeparableKernel2D(Signal1D(0, [1, 0.5]), Signal1D(0, [0.01, 0, 1.0, 0.5]))
        blurred = blur_axis(blur_axis(img, k.sx, "x"), k.sy, "y")
        with pytest.raises(Divergent) as info:
            deblur_separable(blurred, k, "xy", method="step")
        assert info.value.stage == "second"

    def test_bad_order(self):
        k = SeparableKernel2D(Signal1D(0, [1]), Signal1D(0, [1]))
        with pytest.raises(UsageError):
            deblur_separable(img_of(np.ones((2, 2))), k, "zz")


class TestKernels:
    def test_gaussian_values(self):
        g = make_gaussian_kernel(1.0, 10)
        assert g.offset == -10 and len(g) == 21
        assert g[0] == 1.0
        assert g[10] == pytest.approx(math.exp(-50), rel=1e-12)
        assert make_gaussian_kernel(2.0, 4)[2] == pytest.approx(math.exp(-0.5), rel=1e-15)

    @given(st.floats(0.3, 5.0), st.integers(0, 4))
    def test_gaussian_symmetric(self, sigma, extra):
        g = make_gaussian_kernel(sigma, max(1, math.ceil(sigma)) + extra)
        assert np.array_equal(g.values, g.values[::-1])

    def test_gaussian_radius_check(self):
        with pytest.raises(ValueError):
            make_gaussian_kernel(2.5, 2)

    def test_boxcar_unit_gain(self, rng):
        img = random_image(rng, 3, 10, 1)
        flat = ImageRaster(np.full((3, 30, 1), 0.7))
        out = blur_axis(flat, make_boxcar_kernel(5), "x")
        assert np.allclose(out.samples[:, 4:-4, 0], 0.7, atol=1e-15)
        assert make_boxcar_kernel(4).values.tolist() == [0.25] * 4
