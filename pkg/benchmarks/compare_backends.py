"""Benchmark the compiled kernel extension against the pure-Python twin.

The calibration and mu-search paths hammer these scalar kernels, so the
comparison below loops each kernel over a fixed batch of random channel
parameters and reports calls per second for both backends.

Usage: python3 benchmarks/compare_backends.py [--calls N]
"""

import argparse
import random
import time

from qkdmetro import _kernels_py

try:
    from qkdmetro import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def _make_batch(n, seed=20260826):
    rng = random.Random(seed)
    batch = []
    for _ in range(n):
        y0 = rng.uniform(0.0, 1e-3)
        eta = 10.0 ** rng.uniform(-4, 0)
        mu = rng.uniform(0.05, 1.5)
        nu = rng.uniform(0.01, mu * 0.9)
        e_det = rng.uniform(0.0, 0.1)
        p = 10.0 ** rng.uniform(-6, -2)
        rho = 10.0 ** rng.uniform(-11, -8)
        length = rng.uniform(0.0, 50.0)
        batch.append((y0, eta, mu, nu, e_det, p, rho, length))
    return batch


def _workloads(kernels, batch):
    return {
        "binary_entropy": lambda: [kernels.binary_entropy(b[4]) for b in batch],
        "gain": lambda: [kernels.gain(b[0], b[1], b[2]) for b in batch],
        "qber": lambda: [kernels.qber(b[0], b[1], b[2], b[4], 0.5)
                         for b in batch],
        "decoy_y1_low": lambda: [
            kernels.decoy_y1_low(kernels.gain(b[0], b[1], b[2]),
                                 kernels.gain(b[0], b[1], b[3]),
                                 b[2], b[3], b[0]) for b in batch],
        "raman_forward": lambda: [
            kernels.raman_forward(b[5], b[6], 0.8, b[7], 0.21) for b in batch],
        "raman_backward": lambda: [
            kernels.raman_backward(b[5], b[6], 0.8, b[7], 0.21) for b in batch],
        "secret_fraction": lambda: [
            kernels.secret_fraction(0.5, 1.05, 0.01, 0.02, 0.005, 0.03)
            for _ in batch],
    }


def _time(fn, batch_size, repeats=5):
    best = min(_timed_once(fn) for _ in range(repeats))
    return batch_size / best


def _timed_once(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--calls", type=int, default=200000,
                        help="kernel calls per measurement (default 200000)")
    args = parser.parse_args()

    batch = _make_batch(args.calls)
    py = _workloads(_kernels_py, batch)

    print(f"{'kernel':<18} {'python calls/s':>16}", end="")
    if _kernels_cy is not None:
        print(f" {'cython calls/s':>16} {'speedup':>9}")
        cy = _workloads(_kernels_cy, batch)
    else:
        print("   (compiled extension not built)")
        cy = None

    for name in py:
        py_rate = _time(py[name], args.calls)
        line = f"{name:<18} {py_rate:16.3e}"
        if cy is not None:
            cy_rate = _time(cy[name], args.calls)
            line += f" {cy_rate:16.3e} {cy_rate / py_rate:8.2f}x"
        print(line)


if __name__ == "__main__":
    main()
