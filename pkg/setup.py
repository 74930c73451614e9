"""Build the optional compiled kernel extension.

The package works without it (a NumPy fallback is selected at import time),
so the extension is marked optional: a failed compile must not fail the
install. Set ECGDIGITISE_SKIP_EXT=1 to skip the build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ECGDIGITISE_SKIP_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext = Extension(
            "ecgdigitise._kernels._core",
            ["src/ecgdigitise/_kernels/_core.pyx"],
            include_dirs=[numpy.get_include()],
            # -ffp-contract=off: the NumPy fallback must match this kernel
            # bit-for-bit, so fused multiply-adds are disabled.
            extra_compile_args=["-O3", "-ffp-contract=off"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext.optional = True
        ext_modules = cythonize([ext], language_level="3")
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
