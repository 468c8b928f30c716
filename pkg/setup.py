"""Build script: compiles the pairwise-similarity kernel when Cython is available.

Without Cython the package installs in pure-Python mode; hgrec.kernels falls
back to the interpreted implementation at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("HGREC_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "hgrec.kernels._pairwise_cy",
                    ["src/hgrec/kernels/_pairwise_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
