from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "mintime._kernels",
        ["src/mintime/_kernels.pyx"],
        # -ffp-contract=off keeps the compiled kernels bit-identical to the
        # pure-Python fallback (no FMA contraction of a*b+c).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
