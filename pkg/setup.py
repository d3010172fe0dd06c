"""Build the optional compiled kernels.

The package works without them (numpy fallback), so a missing Cython or
compiler only drops the extension.
"""

import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    ext_modules = []
else:
    # No -ffast-math / -march=native: the kernels must round exactly like
    # the numpy fallback.
    ext_modules = cythonize(
        [
            Extension(
                "shiftdeconv._ckernels",
                ["src/shiftdeconv/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O2", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
