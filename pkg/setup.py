"""Build hooks for the optional compiled kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); building it just makes corpus
embedding and pool scoring faster.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "newsadapt._kernels._ngram_c",
                ["src/newsadapt/_kernels/_ngram_c.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython toolchain available: install pure-Python only.
    ext_modules = []

setup(ext_modules=ext_modules)
