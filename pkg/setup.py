from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: ship the pure-Python fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("dao_auction._kernels", ["src/dao_auction/_kernels.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
