import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve()
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        out_dir.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
                f"-DPython3_EXECUTABLE={sys.executable}",
                "-DCMAKE_BUILD_TYPE=Release",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_sqlab", "-j"],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("_sqlab")],
    cmdclass={"build_ext": CMakeBuild},
)
