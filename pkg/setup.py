"""Build hook for the optional compiled projection kernel.

The package is pure Python by default.  When Cython and a C compiler are
available, `python setup.py build_ext --inplace` (or a normal pip build in an
environment that has Cython) compiles `fpfurst._ckernel`, which the package
picks up automatically at import time.  Everything works without it.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/fpfurst/_ckernel.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
