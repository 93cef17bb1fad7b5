import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DIRACTORI_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("diractori._ext._trig", ["src/diractori/_ext/_trig.pyx"],
                       include_dirs=[np.get_include()],
                       extra_compile_args=["-O3", "-fopenmp"],
                       extra_link_args=["-fopenmp"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
