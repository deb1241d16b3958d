import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DYADCONV_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "dyadconv._kernels._core",
                    ["src/dyadconv/_kernels/_core.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython: the package falls back to the pure kernels at import.
        ext_modules = []

setup(ext_modules=ext_modules)
