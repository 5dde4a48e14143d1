import os

from setuptools import setup

ext_modules = []
if os.environ.get("MONOSWEEP_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("monosweep._kernels", ["src/monosweep/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        # No Cython available: install the pure-Python lane only.
        ext_modules = []

setup(ext_modules=ext_modules)
