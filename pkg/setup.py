"""Build script: compiles the optional stump-scan extension.

The package works without the extension (a numpy fallback is selected at
import time), so any compiler failure is downgraded to a warning.
"""

import sys
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the Cython kernel if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            warnings.warn(f"stump-scan extension not built ({exc}); "
                          "falling back to the pure-numpy kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"stump-scan extension not built ({exc}); "
                          "falling back to the pure-numpy kernel")


def extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "mdboost._stump_scan",
        sources=["src/mdboost/_stump_scan.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    # No -ffast-math: the kernel must stay bit-identical to the numpy
    # fallback (same IEEE-754 operation order).
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
