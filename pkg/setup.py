import os

from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or a C compiler) the
# package installs with the pure-Python fallback only.
ext_modules = []
if not os.environ.get("BETAWEIBULL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("betaweibull._kernels", ["src/betaweibull/_kernels.pyx"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
