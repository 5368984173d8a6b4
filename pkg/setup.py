"""Build the optional compiled simplex kernel.

The package works without it: ``covbounds.oracle.simplex`` falls back to the
numpy kernel when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("COVBOUNDS_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "covbounds.oracle._simplex",
                    ["src/covbounds/oracle/_simplex.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
