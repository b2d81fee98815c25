"""Build script for the optional compiled resampling kernel.

The package works without the extension: pneumoscreen._kernels falls back
to a numpy implementation at import time when the compiled module is
missing. Building with Cython just makes the hot resize loop faster.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pneumoscreen._kernels._bilinear",
                ["src/pneumoscreen/_kernels/_bilinear.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
