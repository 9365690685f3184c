import os

from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementations in chromgh._kernels._pure when the extension is unavailable.
# Set CHROMGH_SKIP_EXT=1 to force a pure build.
ext_modules = []
if os.environ.get("CHROMGH_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("chromgh._kernels._speed", ["src/chromgh/_kernels/_speed.pyx"])],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
