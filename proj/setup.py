import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    """Drive the CMake build for the _core module and copy it into place."""

    def build_extension(self, ext):
        source = Path(__file__).parent.resolve()
        build = source / "build-py"
        build.mkdir(exist_ok=True)
        cmakedir = subprocess.check_output(
            [sys.executable, "-m", "pybind11", "--cmakedir"], text=True
        ).strip()
        subprocess.check_call(
            [
                "cmake",
                "-S", str(source),
                "-B", str(build),
                "-DCMAKE_BUILD_TYPE=Release",
                f"-Dpybind11_DIR={cmakedir}",
                f"-DPython3_EXECUTABLE={sys.executable}",
                "-DEULERSIEVE_WHEEL=ON",
            ]
        )
        subprocess.check_call(["cmake", "--build", str(build), "--target", "_core"])
        built = sorted(build.glob("python/eulersieve/_core*"))
        if not built:
            raise RuntimeError("CMake did not produce the _core module")
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], dest)


setup(
    ext_modules=[CMakeExtension("eulersieve._core")],
    cmdclass={"build_ext": CMakeBuild},
)
