"""Build script for the optional compiled kernel.

The package is pure Python plus one Cython extension for the hot
Kloosterman-term loops.  The extension is marked optional: if no C
compiler (or Cython) is available the install still succeeds and the
library falls back to the pure-Python kernel at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("KLEXACT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "klexact._fastkernel",
                    ["src/klexact/_fastkernel.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
