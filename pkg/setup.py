"""Build script for the optional compiled Godunov kernel.

The package is pure Python plus one Cython extension for the hot face-flux
loop.  The extension is marked optional: if no compiler (or Cython) is
available the install still succeeds and the numpy fallback kernel is used.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "twoflux._kernels._godunov_cy",
                ["src/twoflux/_kernels/_godunov_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
