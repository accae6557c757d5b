from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("starling.engine._kernel", ["src/starling/engine/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Without Cython the package installs pure-Python; the engine falls back
    # to starling.engine.kernel_py at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
