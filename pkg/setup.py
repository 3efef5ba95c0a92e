"""Build glue for the optional compiled descent kernel.

The package is pure Python except for soscert._descent, a Cython kernel for
the root-form search inner loop.  If Cython or a C compiler is unavailable the
build still succeeds and the package falls back to the numpy twin
(soscert._descent_py) at import time.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build extensions, but degrade to pure Python instead of failing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled descent kernel: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name}: {exc}")


ext_modules = []
try:
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "soscert._descent",
                ["src/soscert/_descent.pyx"],
                # -ffp-contract=off: the numpy fallback must stay bit-identical,
                # so the C side may not fuse a*b+c into FMA.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
