"""Build script: compiles the scalar special-function core as a C extension.

The extension is optional.  If Cython or a C compiler is unavailable the
install falls back to the pure-Python implementation in
``edgeworth._kernels_py`` (selected at import time by ``edgeworth.specfun``).
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Swallow extension build failures; the package works without them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: C extension build skipped ({exc!r}); "
                  "using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: building {ext.name} failed ({exc!r}); "
                  "using pure-Python kernels")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "edgeworth._kernels",
                ["src/edgeworth/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # pragma: no cover - Cython not installed
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
