"""Build hook for the optional compiled reduction kernels.

The package is pure Python plus one Cython extension.  When Cython or a C
compiler is unavailable the extension is skipped and equigerm.kernel falls
back to the pure kernels, so installation never fails on the extension.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "equigerm._speedups",
                ["src/equigerm/_speedups.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
