"""Builds the optional Cython kernel; the package falls back to numpy without it."""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("WRCOMM_NO_EXT", "") in ("", "0"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        sys.stderr.write("wrcomm: Cython/numpy missing at build time, skipping extension\n")
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "wrcomm._ckernels",
                    ["src/wrcomm/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"] if sys.platform != "win32" else ["/O2"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
