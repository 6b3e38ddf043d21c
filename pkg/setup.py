"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python twin is selected at
import time), so any failure here is non-fatal by design: remove the
ext_modules and reinstall to get the fallback.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("qkdmetro._kernels", ["src/qkdmetro/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
