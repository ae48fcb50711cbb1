"""Brute-force invariant checks over small networks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from .pairing import NetworkParams, build_schedule
from .permutation import shuffle_fisher_yates


@dataclass(frozen=True)
class Violation:
    check: str
    n: int
    r: int
    x: int
    detail: str

    def __str__(self):
        return f"{self.check} violated at (n={self.n}, r={self.r}, x={self.x}): {self.detail}"


def _schedule(n: int, order=None) -> np.ndarray:
    return build_schedule(NetworkParams(n), order).matrix


def check_network(n: int, seeds=(0, 1, 2), schedule_fn: Optional[Callable] = None) -> Iterator[Violation]:
    """Yield every violation found for capacity ``n``.

    Checks completeness, mutuality, round recovery and, for each seed,
    equivalence of the permuted schedule with a row-reordered plain one.
    """
    if schedule_fn is None:
        schedule_fn = _schedule
    base = np.asarray(schedule_fn(n))
    seen: dict[tuple[int, int], int] = {}
    for r in range(n):
        for x in range(n):
            t = int(base[r, x])
            if t < 0:
                if (2 * x - r) % n:
                    yield Violation("self-loop", n, r, x, "self-loop where (r - x) mod n != x")
                continue
            if t == x or not 0 <= t < n:
                yield Violation("range", n, r, x, f"target {t} invalid")
                continue
            if int(base[r, t]) != x:
                yield Violation("mutuality", n, r, x, f"{x}->{t} but {t}->{int(base[r, t])}")
            if (t + x) % n != r:
                yield Violation("recovery", n, r, x, f"({t} + {x}) mod {n} != {r}")
            if x < t:
                if (x, t) in seen:
                    yield Violation("completeness", n, r, x, f"edge {x}-{t} repeated (first in round {seen[x, t]})")
                seen[x, t] = r
    missing = n * (n - 1) // 2 - len(seen)
    if missing:
        pair = next((x, y) for x in range(n) for y in range(x + 1, n) if (x, y) not in seen)
        yield Violation("completeness", n, (pair[0] + pair[1]) % n, pair[0], f"{missing} edge(s) never formed, e.g. {pair}")
    for seed in seeds:
        order = shuffle_fisher_yates(NetworkParams(n), seed).order
        secure = np.asarray(schedule_fn(n, order))
        for r in range(n):
            if not np.array_equal(secure[r], base[int(order[r])]):
                x = int(np.flatnonzero(secure[r] != base[int(order[r])])[0])
                yield Violation("permutation-equivalence", n, r, x, f"seed {seed}: row differs from plain row {int(order[r])}")


def verify_all(max_n: int, seeds=(0, 1, 2), schedule_fn: Optional[Callable] = None) -> Optional[Violation]:
    """First violation for any ``2 <= n <= max_n``, or ``None``."""
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    for n in range(2, max_n + 1):
        for v in check_network(n, seeds, schedule_fn):
            return v
    return None
