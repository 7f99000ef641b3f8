"""Selects the compiled kernel twin when available, else the pure one.

``python setup.py build_ext`` (run automatically by pip when Cython and a C
compiler are present) produces ``satmon._kernels_c`` from the same source as
``satmon._kernels``.  ``KERNEL_IMPL`` reports which twin is active.
"""

try:  # pragma: no cover - depends on build environment
    from . import _kernels_c as _impl

    KERNEL_IMPL = "compiled"
except ImportError:  # pragma: no cover
    from . import _kernels as _impl

    KERNEL_IMPL = "pure-python"

identity_matrix = _impl.identity_matrix
mat_mul = _impl.mat_mul
mat_vec = _impl.mat_vec
snf_with_transforms = _impl.snf_with_transforms
hnf_rows = _impl.hnf_rows
scan_box_points = _impl.scan_box_points
cd_minimal_nonneg_solutions = _impl.cd_minimal_nonneg_solutions
