import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("svipipe._ext._ckernels", ["src/svipipe/_ext/_ckernels.pyx"],
                   include_dirs=[np.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
        compiler_directives={"language_level": 3},
    )
    for ext in ext_modules:
        # a failed compile should not block installing the pure-Python package
        ext.optional = True
except ImportError:
    # no Cython: the package falls back to the numpy kernels
    ext_modules = []

setup(ext_modules=ext_modules)
