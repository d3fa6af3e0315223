"""Build script: compiles the optional GF(2) kernel extension.

The package works without the extension (a pure-Python backend is
selected at import time), so a missing Cython toolchain only costs
speed, not functionality.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "topomemo._gf2._gf2ext",
                sources=["src/topomemo/_gf2/_gf2ext.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
