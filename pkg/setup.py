import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; rghyper falls back to _pykernels
    cythonize = None

ext_modules = []
if cythonize is not None and os.environ.get("RGHYPER_NO_EXT") != "1":
    ext_modules = cythonize(
        [
            Extension(
                "rghyper._ckernels",
                ["src/rghyper/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                language="c++",
                # no fp contraction: distances must match the numpy path bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
