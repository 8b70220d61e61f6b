"""Build script: compiles the optional Cython covering kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile only costs speed. Set
MUTEXCOVER_NO_EXT=1 to skip the extension entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("MUTEXCOVER_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "mutexcover._kernelc",
                    ["src/mutexcover/_kernelc.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
