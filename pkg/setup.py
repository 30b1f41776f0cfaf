"""Build script.

The package is pure Python except for an optional Cython kernel that
accelerates the exhaustive Diophantine scan in liesynth.timefix.  If Cython
or a C compiler is unavailable the extension is skipped and the package
falls back to the vectorised NumPy implementation at import time.
"""

import logging

from setuptools import setup
from setuptools.command.build_ext import build_ext

log = logging.getLogger("liesynth.setup")


class OptionalBuildExt(build_ext):
    """Build extensions, but never fail the install over them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            log.warning("skipping compiled scan kernel: %s", exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            log.warning("skipping %s: %s", ext.name, exc)


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/liesynth/_scan.pyx"], language_level="3", annotate=False
    )
except ImportError:
    log.warning("Cython not available; using the NumPy scan fallback")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
