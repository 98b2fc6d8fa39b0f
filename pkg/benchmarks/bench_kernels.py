"""Time the compiled and pure-Python kernels on identical inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""
from __future__ import annotations

import argparse
import random
import time

from osx import _kernels_py
from osx.fixtures import random_point
from osx.metric import _letter_images

try:
    from osx import _kernels
except ImportError:  # pragma: no cover
    _kernels = None

CASES = [(2, 8), (2, 10), (2, 12), (3, 6), (3, 8)]


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not built; run pip install -e . first")

    rng = random.Random(args.seed)
    print(f"{'rank':>4} {'len':>4} {'nodes':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for rank, max_len in CASES:
        x, y = random_point(rng, rank), random_point(rng, rank)
        xi, xw, _ = _letter_images(x)
        yi, yw, _ = _letter_images(y)
        call = (2 * rank, max_len, xi, xw, yi, yw)
        a = _kernels_py.max_stretch_words(*call)
        b = _kernels.max_stretch_words(*call)
        assert a[0] * b[1] == a[1] * b[0], "backends disagree"
        tp = _best(lambda: _kernels_py.max_stretch_words(*call), args.repeat)
        tc = _best(lambda: _kernels.max_stretch_words(*call), args.repeat)
        print(f"{rank:>4} {max_len:>4} {b[3]:>10} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")

    w = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(200_000)]
    tp = _best(lambda: _kernels_py.free_reduce(w), args.repeat)
    tc = _best(lambda: _kernels.free_reduce(w), args.repeat)
    print(f"free_reduce on 200k letters: python {tp:.4f}s, cython {tc:.4f}s, {tp / tc:.1f}x")


if __name__ == "__main__":
    main()
