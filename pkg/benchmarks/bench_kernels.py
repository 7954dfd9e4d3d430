"""Time the compiled and pure-Python hot loops on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from hypbilliards import _pykernels
from hypbilliards.polygon import ModuliChart, from_chart, regular

try:
    from hypbilliards import _ckernels
except ImportError:
    _ckernels = None

CASES = [
    ("regular(4), (1,2,4,1,3)", regular(4), (1, 2, 4, 1, 3)),
    ("regular(6), (1,4,2,6,3,5)", regular(6), (1, 4, 2, 6, 3, 5)),
    ("chart(0.4,-0.3), (1,3,5,2,4,1,4,2)", from_chart(ModuliChart(5, (0.4, -0.3))), (1, 3, 5, 2, 4, 1, 4, 2)),
]


def frames(P, labels):
    F, D = P.hyperboloid_frames
    idx = [s - 1 for s in labels]
    return np.ascontiguousarray(F[idx]), np.ascontiguousarray(D[idx])


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'case':38s} {'kernel':18s} " + " ".join(f"{b:>12s}" for b, _ in backends) + "   speed-up")
    for name, P, labels in CASES:
        F, D = frames(P, labels)
        t = np.zeros(len(labels))
        for kernel in ("coordinate_descent", "cyclic_length"):
            times = []
            for _, mod in backends:
                if kernel == "coordinate_descent":
                    fn = lambda mod=mod: mod.coordinate_descent(F, D, t, 1e-12, 100_000)
                else:
                    fn = lambda mod=mod: mod.cyclic_length(F, D, t)
                times.append(best_of(fn, args.repeat))
            ratio = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else "      n/a"
            cells = " ".join(f"{1e3 * x:10.3f}ms" for x in times)
            print(f"{name:38s} {kernel:18s} {cells}   {ratio}")
    if _ckernels is None:
        print("compiled extension not built; only the pure-Python timings are shown")


if __name__ == "__main__":
    main()
