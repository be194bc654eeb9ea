from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "braidcong._kernels._core",
        ["src/braidcong/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
