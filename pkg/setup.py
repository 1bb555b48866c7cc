from Cython.Build import cythonize
from setuptools import Extension, setup

# fp contraction is disabled so the compiled kernels round exactly like the
# pure-Python fallback
extensions = [
    Extension(
        "imufuse._kernels",
        ["src/imufuse/_kernels.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
