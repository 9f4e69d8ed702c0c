"""Build script for the optional compiled kernels.

The package works without the extension: ``pwgraph.kernels`` falls back to
the numpy implementation in ``pwgraph._purepy`` when ``pwgraph._core`` is
missing.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("PWGRAPH_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "pwgraph._core",
                    ["src/pwgraph/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
