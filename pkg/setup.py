"""Build script for the compiled simulation kernel.

The extension is optional at runtime (a pure-Python kernel ships alongside
it) but built by default. Floating-point contraction is disabled so the
compiled kernel stays bit-identical to the pure one; -ffast-math would
break that and must never be added.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "statecloak._kernel._core",
        sources=["src/statecloak/_kernel/_core.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

if cythonize is not None:
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
else:
    ext_modules = []

setup(ext_modules=ext_modules)
