"""Build hook: compiles the optional Cython kernel when Cython is available.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); set BFREEKIT_NO_EXT=1 to skip the
compile attempt explicitly.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("BFREEKIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/bfreekit/_kernels/_core.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
