"""Compiled versus pure Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the three hot paths on identical inputs and checks that both backends
return the same numbers before reporting.
"""
import argparse
import math
import timeit

import numpy as np

from gaussmode._kernels import available_backends, load_backend

KP = (1.25, 2.0, 1.0)  # k' of k = (1, 0.25), omega = 1


def ftilde_scan(mod):
    ts = np.linspace(0.01, 1.0, 2000)
    return [mod.ftilde_minus(*KP, float(t)) for t in ts]


def root(mod):
    return mod.bisect_root(*KP, 1e-6, 2.5, 1e-13, 200)[0]


def grid(mod):
    a = np.array([[2.0, 0.3], [0.3, 1.5]])
    b = np.array([[1.8, -0.2], [-0.2, 1.2]])
    c = np.array([[0.6, 0.1], [0.0, -0.5]])
    s = np.linspace(0.0, 1.0, 65)
    phi = np.linspace(0.0, math.pi, 64, endpoint=False)
    return mod.cond_det_grid(a, b, c, s, phi)


CASES = {
    "ftilde_minus x2000": ftilde_scan,
    "bisect_root": root,
    "cond_det_grid 65x64": grid,
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is available")
    mods = {name: load_backend(name) for name in backends}

    print(f"{'kernel':<22}" + "".join(f"{b:>14}" for b in mods) + ("     speedup" if len(mods) == 2 else ""))
    for label, fn in CASES.items():
        outs = {b: np.asarray(fn(m), dtype=float) for b, m in mods.items()}
        ref = outs["python"]
        for b, o in outs.items():
            if not np.allclose(o, ref, rtol=1e-12, atol=1e-15):
                raise SystemExit(f"{label}: backend {b} disagrees with python")
        times = {}
        for b, m in mods.items():
            number = 3
            times[b] = min(timeit.repeat(lambda: fn(m), number=number, repeat=args.repeat)) / number
        row = f"{label:<22}" + "".join(f"{times[b] * 1e3:>11.3f} ms" for b in mods)
        if len(mods) == 2:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
