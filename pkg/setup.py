"""Build the optional compiled kernels.

Without Cython or a C compiler the package installs pure Python and
``betakw._backend`` falls back to ``betakw._pykernels``.
"""
import os
import sys

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    setup()
    sys.exit(0)

if os.environ.get("BETAKW_NO_EXT"):
    setup()
    sys.exit(0)

extensions = [
    Extension(
        "betakw._ckernels",
        [os.path.join("src", "betakw", "_ckernels.pyx")],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3", "embedsignature": True},
    )
)
