"""Build hook: compiles the optional C extension for the hot kernels.

The package works without the extension (a pure-Python fallback is
selected at import time), so any failure to cythonize or compile is
non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gridaudit._kernels._speedups",
                ["src/gridaudit/_kernels/_speedups.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
