"""Compare the numba and numpy state-sum kernels.

    python benchmarks/bench_kernels.py --sizes 8 10 12 14 --repeat 3
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from vkspider import _kernels
from vkspider import invariants as inv
from vkspider.diagrams import random_diagram


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    backends = _kernels.available_backends()
    rng = random.Random(args.seed)
    print(f"{'n':>3} {'states':>7} {'kernel':>10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in args.sizes:
        d = random_diagram(n, rng)
        t = inv._tables(d)
        masks = np.arange(1 << n, dtype=np.int64)
        jobs = {
            "webs": lambda b: _kernels.resolve_webs(masks, t.succ, t.mate, t.cross, backend=b),
            "kauffman": lambda b: _kernels.kauffman_counts(masks, t.succ, t.mate, t.cross, t.over, t.signs, backend=b),
        }
        for name, job in jobs.items():
            for b in backends:
                job(b)  # warm up (numba compiles on first call)
            secs = {b: best_of(lambda: job(b), args.repeat) for b in backends}
            speed = f"{secs['numpy'] / secs['numba']:8.1f}x" if "numba" in secs else ""
            cells = " ".join(f"{secs[b] * 1e3:8.2f}ms" for b in backends)
            print(f"{n:>3} {1 << n:>7} {name:>10} {cells} {speed}")


if __name__ == "__main__":
    main()
