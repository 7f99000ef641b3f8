"""Build script: optionally compiles the hot-kernel module with Cython.

``satmon/_kernels.py`` is plain Python and is the single source of truth.
When Cython and a C toolchain are present it is additionally compiled as the
extension module ``satmon._kernels_c`` (Cython pure-Python mode); at import
time ``satmon.kernels`` picks the compiled twin if it built, else the
interpreted one.  A failed compile must never break installation.
"""

import os
import shutil

from setuptools import setup

ext_modules = []
if os.environ.get("SATMON_NO_ACCEL") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        here = os.path.dirname(os.path.abspath(__file__))
        src = os.path.join(here, "src", "satmon", "_kernels.py")
        twin = os.path.join(here, "src", "satmon", "_kernels_c.py")
        # Cython derives the module name from the file name; compile a copy.
        shutil.copyfile(src, twin)
        ext_modules = cythonize(
            [Extension("satmon._kernels_c", [os.path.relpath(twin, here)])],
            language_level=3,
            quiet=True,
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
