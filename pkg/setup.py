"""Build hook for the optional compiled backend.

The package is pure-python by default; when Cython and a C compiler are
available the directed-rounding kernel extension is built.  Install
stays functional without it (the numpy backend is selected at import).

-frounding-math is required: the kernels change the FP rounding mode at
runtime, so the compiler must not constant-fold or reorder FP ops.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "svmcert._core._speed",
            ["src/svmcert/_core/_speed.pyx"],
            extra_compile_args=["-O2", "-frounding-math"],
        )],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
