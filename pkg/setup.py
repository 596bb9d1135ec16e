"""Builds the optional compiled kernel extension.

If Cython or a C toolchain is unavailable the install still succeeds and the
package falls back to the pure-NumPy kernels at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "latentring._native",
                ["src/latentring/_native.pyx"],
                # -ffp-contract=off keeps float results reproducible against
                # the NumPy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
