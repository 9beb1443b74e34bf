"""Build script: compiles the optional Cython core.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a missing compiler or Cython is not fatal.
"""

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "entrodyn._core._kernels_cy",
                ["src/entrodyn/_core/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
