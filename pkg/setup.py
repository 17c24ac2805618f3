"""Build script: compiles the summation kernels when a toolchain is available.

The compiled extension is optional.  If Cython or a C compiler is missing the
package installs anyway and falls back to the pure-Python kernels at import
time (see charseq_kit._kernels).  -ffp-contract=off keeps the compiled kernels
bit-identical to the pure path: both must perform the same IEEE operations in
the same order.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip extension compilation instead of failing the whole install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain-dependent
            print(f"warning: compiled kernels skipped ({exc}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain-dependent
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-Python fallback will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - toolchain-dependent
        return []
    ext = Extension(
        "charseq_kit._kernels._cy",
        sources=["src/charseq_kit/_kernels/_cy.pyx"],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
