from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "sympjet._kernels._jetcore",
                sources=["src/sympjet/_kernels/_jetcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3, "embedsignature": True},
    )
except ImportError:
    # Pure-Python fallback in sympjet._kernels keeps the package usable
    # without a compiler.
    extensions = []

setup(ext_modules=extensions)
