"""Build hook for the optional Cython kernels.

The compiled module is optional: when Cython or a C compiler is missing the
package installs anyway and ``gaussmode._kernels`` falls back to the pure
Python implementation.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "gaussmode._kernels._ckernels",
                ["src/gaussmode/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
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
