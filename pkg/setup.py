"""Build script: compiles the optional fast-path extension rcdkit._fastcore.

The package works without the extension (rcdkit._purecore is a drop-in
fallback selected at import), so the build is marked optional and a missing
compiler only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "rcdkit._fastcore",
                sources=["src/rcdkit/_fastcore.pyx"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        language_level="3",
    )
else:
    extensions = []

setup(ext_modules=extensions)
