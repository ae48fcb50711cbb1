"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from schirp import _kernels_py as pure

try:
    from schirp import _kernels as compiled
except ImportError:
    compiled = None


def cases(k):
    order_256 = k.shuffle_indices(256, 7, False)
    alive = np.ones(256, dtype=np.uint8)
    alive[::7] = 0
    believed = np.arange(256, dtype=np.int64)

    def full_cycle():
        seen = np.zeros((256, 256), dtype=np.uint8)
        for r in range(256):
            believed[:] = r
            k.round_step(order_256, 256, r, alive, believed, seen)

    return {
        "shuffle n=1e6": lambda: k.shuffle_indices(1_000_000, 1, False),
        "sattolo n=1e5": lambda: k.shuffle_indices(100_000, 1, True),
        "schedule_matrix n=512": lambda: k.schedule_matrix(k.shuffle_indices(512, 3, False), 512),
        "round_step cycle n=256": full_cycle,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = {"python": pure}
    if compiled is not None:
        backends["compiled"] = compiled
    results = {name: {} for name in backends}
    for name, mod in backends.items():
        for label, fn in cases(mod).items():
            results[name][label] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    labels = list(results["python"])
    print(f"{'kernel':<26}{'python (s)':>12}{'compiled (s)':>14}{'speedup':>10}")
    for label in labels:
        py = results["python"][label]
        if compiled is None:
            print(f"{label:<26}{py:>12.4f}{'n/a':>14}{'':>10}")
        else:
            c = results["compiled"][label]
            print(f"{label:<26}{py:>12.4f}{c:>14.5f}{py / c:>9.0f}x")


if __name__ == "__main__":
    main()
