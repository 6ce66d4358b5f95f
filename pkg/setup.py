"""Build script: compiles the optional C kernel, falls back to pure Python."""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the extension instead of failing when no compiler is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on host toolchain
            print(f"warning: skipping C kernel build ({exc}); "
                  "the pure-Python kernel will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: could not build {ext.name} ({exc}); "
                  "the pure-Python kernel will be used")


def extensions():
    if os.environ.get("SYMBREAK_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        return []
    return cythonize(
        [Extension("symbreak._kernel", ["src/symbreak/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
