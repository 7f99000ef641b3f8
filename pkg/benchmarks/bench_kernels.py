"""Compare the compiled kernel extension against the pure-Python twin.

Both modules are built from the same source (``satmon/_kernels.py``); the
compiled copy is ``satmon._kernels_c`` when Cython and a C compiler were
available at install time.  Run:

    python3 benchmarks/bench_kernels.py
"""

import random
import time

from satmon import _kernels as pure

try:
    from satmon import _kernels_c as compiled
except ImportError:
    compiled = None


def bench(fn, *args, repeat=5):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def make_inputs():
    rng = random.Random(20240817)
    snf_mats = [
        [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)] for _ in range(20)
    ]
    # a 4-dimensional cone scan: box [-6, 10]^4 with 6 inequalities
    lows = [-6] * 4
    highs = [10] * 4
    ineqs = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 1, -1, 0],
        [2, -1, 0, 1],
    ]
    cd_mat = [[1, 2, -3, 0, 1], [0, 1, 1, -2, -1]]
    return snf_mats, (lows, highs, ineqs), cd_mat


def run(mod, name, snf_mats, scan_args, cd_mat):
    t_snf, _ = bench(lambda: [mod.snf_with_transforms(m) for m in snf_mats])
    t_scan, pts = bench(lambda: mod.scan_box_points(*scan_args))
    t_cd, sols = bench(lambda: mod.cd_minimal_nonneg_solutions(cd_mat, 5, 10 ** 6))
    print(f"{name:>12}  snf x20: {t_snf*1000:8.2f} ms   "
          f"scan({len(pts)} pts): {t_scan*1000:8.2f} ms   "
          f"completion({len(sols)} sols): {t_cd*1000:8.2f} ms")
    return t_snf, t_scan, t_cd


def main():
    snf_mats, scan_args, cd_mat = make_inputs()
    p = run(pure, "pure-python", snf_mats, scan_args, cd_mat)
    if compiled is None:
        print("compiled twin not built (install with Cython available to compare)")
        return
    c = run(compiled, "compiled", snf_mats, scan_args, cd_mat)
    for label, tp, tc in zip(("snf", "scan", "completion"), p, c):
        print(f"{label:>12}  speedup: {tp / tc:5.2f}x")
    # the twins must agree exactly
    for m in snf_mats[:3]:
        assert pure.snf_with_transforms(m)[2] == compiled.snf_with_transforms(m)[2]
    assert pure.scan_box_points(*scan_args) == compiled.scan_box_points(*scan_args)
    assert pure.cd_minimal_nonneg_solutions(cd_mat, 5, 10 ** 6) == \
        compiled.cd_minimal_nonneg_solutions(cd_mat, 5, 10 ** 6)
    print("twins agree on all benchmark inputs")


if __name__ == "__main__":
    main()
