"""Build script for the optional compiled stencil kernels.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the hot finite-difference and
vector-algebra loops faster.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "spinflow._stencils",
                ["src/spinflow/_stencils.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
