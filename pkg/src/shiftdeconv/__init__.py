"""Direct non-blind deconvolution of signals and images by shift methods."""

from .combined import (ShiftCombination, ShiftMatrix, apply_combination,
                       build_shift_matrix, combined_deconvolve, remodel,
                       solve_coefficients)
from .errors import (BadCenter, BlurWiderThanImage, DeconvolutionError,
                     Divergent, FormatError, HalfWidthTooSmall,
                     IncompleteResponse, KernelShape, LeadingZeroKernel,
                     NumericalFailure, RankDeficient, SingularShiftMatrix,
                     UsageError)
from .image import (Axis, ImageRaster, SeparableKernel2D, blur_axis,
                    deblur_axis, deblur_separable, make_boxcar_kernel,
                    make_gaussian_kernel, motion_deblur_uniform)
from .kernels import backend
from .signals import (NoiseSpec, Signal1D, add_noise, axpy, convolve,
                      max_abs_error, mirror, read_signal, shift, write_signal)
from .step import (IterationTrace, StepOptions, estimate_m_max,
                   flip_to_dominant, modified_doubling, step_by_step)

__version__ = "0.1.0"
