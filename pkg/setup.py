"""Build the compiled BDD and search kernels when Cython and a C compiler are available.

The package works without them: ``dqcount.bdd`` and ``dqcount.brute`` fall
back to pure-Python kernels at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("DQCOUNT_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "dqcount.bdd._kernel",
                    ["src/dqcount/bdd/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                ),
                Extension(
                    "dqcount._search",
                    ["src/dqcount/_search.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                ),
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
