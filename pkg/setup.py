from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("botminer._kernel", ["src/botminer/_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    # Pure-Python fallback kernel is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
