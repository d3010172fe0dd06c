"""Exception hierarchy.

Numerical failures (the method cannot produce a trustworthy answer for the
given data) derive from :class:`NumericalFailure`; the CLI maps those to exit
code 2. Shape and argument problems derive from :class:`UsageError`, format
problems from :class:`FormatError`.
"""


class DeconvolutionError(Exception):
    """Base class for every error raised by this package."""


class NumericalFailure(DeconvolutionError):
    pass


class UsageError(DeconvolutionError, ValueError):
    pass


class FormatError(DeconvolutionError, ValueError):
    """Malformed signal, combination, trace or raster file."""


class LeadingZeroKernel(NumericalFailure):
    pass


class Divergent(NumericalFailure):
    """Iteration coefficients blew up before the requested prefix was rebuilt.

    ``trace`` holds the iteration record up to the failing step. Image
    routines also set ``line`` and ``channel``.
    """

    def __init__(self, message, trace=None, line=None, channel=None):
        super().__init__(message)
        self.trace = trace
        self.line = line
        self.channel = channel


class SingularShiftMatrix(NumericalFailure):
    pass


class HalfWidthTooSmall(NumericalFailure):
    pass


class IncompleteResponse(NumericalFailure):
    pass


class RankDeficient(NumericalFailure):
    pass


class KernelShape(UsageError):
    pass


class BadCenter(UsageError):
    pass


class BlurWiderThanImage(UsageError):
    pass
