"""Build script for the optional compiled kernels.

The package works without the extension (a pure numpy/scipy fallback is
selected at import time); building it makes the hot loops (collapsed Gibbs
sweeps, exact kNN scoring) fast enough for full-size benchmark runs.
Set NOVELTYBENCH_SKIP_EXT=1 to install without compiling.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("NOVELTYBENCH_SKIP_EXT", "") not in ("1", "true"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "noveltybench.kernels._ext",
                    ["src/noveltybench/kernels/_ext.pyx"],
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
