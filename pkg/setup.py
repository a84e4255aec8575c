"""Build script: compiles the optional Cython simulation kernel.

The package is fully functional without the extension (a pure-Python
driver is selected at import time); the kernel only accelerates the
per-round simulation loops.  Set DPNCB_NO_EXT=1 to skip compilation.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DPNCB_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        # random_standard_uniform and friends live in numpy's static
        # libnpyrandom, shipped next to the random package.
        np_random_lib = os.path.join(os.path.dirname(numpy.random.__file__), "lib")
        ext_modules = cythonize(
            [
                Extension(
                    "dpncb._kernel",
                    ["src/dpncb/_kernel.pyx"],
                    include_dirs=[numpy.get_include()],
                    library_dirs=[np_random_lib],
                    libraries=["npyrandom"],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build-env dependent
        print(f"dpncb: skipping Cython kernel ({exc}); pure-Python backend will be used")
        ext_modules = []

setup(ext_modules=ext_modules)
