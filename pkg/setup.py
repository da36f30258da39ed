"""Build script: compiles the shortest-path kernel, degrading to pure Python.

The package is fully functional without the extension (qhlab._kernel falls
back to the heapq implementation); the compiled kernel is what makes the
large-grid experiments fast.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, otherwise warn and continue."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"compiled kernel unavailable ({exc}); "
                          "qhlab will use the pure-Python shortest-path lane")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"failed to build {ext.name} ({exc}); "
                          "qhlab will use the pure-Python shortest-path lane")


def _extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "qhlab._fastpaths",
        sources=["src/qhlab/_fastpaths.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
