"""Build script for the optional compiled kernels.

The package works without the extension (pcdissect.kernels falls back to
the NumPy implementations), so a failed extension build is tolerated.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pcdissect._ckernels",
                ["src/pcdissect/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
