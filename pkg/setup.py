import os

import numpy as np
from setuptools import Extension, setup

# QPD_NO_EXT=1 skips the compiled core; the package then runs on its pure-Python kernels.
ext_modules = []
if not os.environ.get("QPD_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qpd._kernels",
                ["src/qpd/_kernels.pyx"],
                include_dirs=[np.get_include()],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            )
        ],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False, "cdivision": True},
    )

setup(ext_modules=ext_modules)
