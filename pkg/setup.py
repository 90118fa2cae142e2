"""Build script: compile the optional HNF/SNF extension kernel.

The package works without the extension (a pure-Python twin is selected at
import time); installation never fails because of a missing C toolchain.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cyclostark._normcore",
                ["src/cyclostark/_normcore.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )
except ImportError:
    print("Cython not available; installing with the pure-Python lattice kernel only")

setup(ext_modules=ext_modules)
