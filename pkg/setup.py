"""Build the optional Cython kernels; the package falls back to numpy without them."""
import os
import sys

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("HASHEDPF_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "hashedpf._ckernels",
                    ["src/hashedpf/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
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
