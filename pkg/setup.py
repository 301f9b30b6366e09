from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python install: the package falls back to the NumPy kernels.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "chemofront._kernels.core",
                ["src/chemofront/_kernels/core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
