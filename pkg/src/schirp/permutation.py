"""Cycle permutations for S-CHIRP.

A cycle permutation reorders which round value is used in each round of a
cycle. Nodes sharing the permutation still pair up exactly as in plain
CHIRP, only in a shuffled round order; outsiders without it cannot predict
who talks to whom.

Raw file format: ``node_cnt`` little-endian uint32 values, ``order[0]``
first, no header.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from ._backend import kernels
from .pairing import DomainError, NetworkParams, PairOutcome, _outcome

MASK64 = 0xFFFFFFFFFFFFFFFF
RAW_DTYPE = np.dtype("<u4")
BYTES_PER_INDEX = RAW_DTYPE.itemsize
# factorials above this are reported through log-gamma only
EXACT_FACTORIAL_LIMIT = 20000


class PermutationError(ValueError):
    """A round sequence that is not a permutation of ``[0, n)``."""

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message)
        self.position = position


class SplitMix64:
    """splitmix64 stream (Steele, Lea & Flood); 64-bit outputs."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state, out = kernels.splitmix64_next(self.state)
        return int(out)

    def below(self, bound: int) -> int:
        return self.next() % bound


@dataclass(frozen=True)
class Seeded:
    seed: int
    algorithm: str = "fisher-yates"


@dataclass(frozen=True)
class External:
    label: str


Provenance = Union[Seeded, External, None]


@dataclass(frozen=True, eq=False)
class CyclePermutation:
    """Round-value sequence ``Pr(C)``; ``order[r]`` is the value used in round ``r``."""

    order: np.ndarray
    provenance: Provenance = None
    _inverse: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        order = np.array(self.order, dtype=np.uint32, copy=True)
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    @property
    def node_cnt(self) -> int:
        return len(self.order)

    @property
    def params(self) -> NetworkParams:
        return NetworkParams(self.node_cnt)

    def __eq__(self, other):
        if not isinstance(other, CyclePermutation):
            return NotImplemented
        return np.array_equal(self.order, other.order)

    def __hash__(self):
        return hash(self.order.tobytes())

    def __len__(self):
        return len(self.order)

    def tolist(self) -> list[int]:
        return self.order.tolist()

    @property
    def inverse(self) -> np.ndarray:
        """``inverse[v]`` is the round at which value ``v`` is used."""
        if self._inverse is None:
            inv = np.empty_like(self.order)
            inv[self.order] = np.arange(self.node_cnt, dtype=np.uint32)
            inv.setflags(write=False)
            object.__setattr__(self, "_inverse", inv)
        return self._inverse

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.order, np.arange(self.node_cnt)))

    def to_bytes(self) -> bytes:
        return self.order.astype(RAW_DTYPE, copy=False).tobytes()

    def write(self, path) -> int:
        data = self.to_bytes()
        Path(path).write_bytes(data)
        return len(data)


def identity_cycle(params: NetworkParams) -> CyclePermutation:
    return CyclePermutation(np.arange(params.node_cnt, dtype=np.uint32), External("identity"))


def shuffle_fisher_yates(params: NetworkParams, seed: int) -> CyclePermutation:
    """Seeded Fisher-Yates (Durstenfeld) shuffle of ``[0, n)``.

    Bit-exact contract: a splitmix64 stream seeded with ``seed``; for ``i``
    from ``n-1`` down to 1 draw ``v`` and swap positions ``i`` and
    ``v mod (i+1)``.
    """
    seed = _check_seed(seed)
    order = kernels.shuffle_indices(params.node_cnt, seed, False)
    return CyclePermutation(order, Seeded(seed, "fisher-yates"))


def shuffle_sattolo(params: NetworkParams, seed: int) -> CyclePermutation:
    """Like :func:`shuffle_fisher_yates` but swaps with ``v mod i``; output is one n-cycle."""
    if params.node_cnt < 2:
        raise DomainError("Sattolo's algorithm needs node_cnt >= 2")
    seed = _check_seed(seed)
    order = kernels.shuffle_indices(params.node_cnt, seed, True)
    return CyclePermutation(order, Seeded(seed, "sattolo"))


def _check_seed(seed: int) -> int:
    if not 0 <= seed <= MASK64:
        raise DomainError(f"seed {seed} is not a 64-bit unsigned value")
    return int(seed)


def load_cycle(params: NetworkParams, values: Iterable[int], label: str = "external") -> CyclePermutation:
    values = [int(v) for v in values]
    n = params.node_cnt
    if len(values) != n:
        raise PermutationError(f"expected {n} values, got {len(values)}")
    arr = np.asarray(values, dtype=np.int64)
    bad = np.flatnonzero((arr < 0) | (arr >= n))
    if bad.size:
        pos = int(bad[0])
        raise PermutationError(f"value {values[pos]} at position {pos} outside [0, {n})", pos)
    seen = np.zeros(n, dtype=bool)
    # first repeat, scanning left to right
    for pos, v in enumerate(arr.tolist()):
        if seen[v]:
            raise PermutationError(f"duplicate value {v} at position {pos}", pos)
        seen[v] = True
    return CyclePermutation(arr.astype(np.uint32), External(label))


def read_cycle(path, node_cnt: Optional[int] = None) -> CyclePermutation:
    """Load a raw permutation file; ``node_cnt`` defaults to file size / 4."""
    data = Path(path).read_bytes()
    if len(data) % BYTES_PER_INDEX:
        raise PermutationError(
            f"{path}: size {len(data)} is not a multiple of {BYTES_PER_INDEX} bytes"
        )
    values = np.frombuffer(data, dtype=RAW_DTYPE)
    n = len(values) if node_cnt is None else node_cnt
    if n < 1:
        raise PermutationError(f"{path}: empty permutation file")
    return load_cycle(NetworkParams(n), values.tolist(), label=str(path))


def pair_target_secure(
    params: NetworkParams, cycle: CyclePermutation, source: int, round: int
) -> PairOutcome:
    if cycle.node_cnt != params.node_cnt:
        raise DomainError(
            f"cycle has {cycle.node_cnt} entries but node_cnt is {params.node_cnt}"
        )
    source = params.check_node(source, "source")
    round = params.check_round(round)
    return _outcome(source, (int(cycle.order[round]) - source) % params.node_cnt)


@dataclass(frozen=True)
class PermutationStats:
    node_cnt: int
    permutation_count: Optional[int]
    mantissa: float
    exponent: int
    storage_bytes: int

    def render(self, digits: int = 3) -> str:
        lead, exp = self.significant(digits)
        text = str(lead)
        if digits > 1:
            text = f"{text[0]}.{text[1:]}"
        return f"{text}e{exp:+03d}"

    def significant(self, digits: int = 3, mode: str = "round") -> tuple[int, int]:
        """Leading ``digits`` significant digits as an integer plus the decimal exponent.

        ``mode`` is ``"round"`` (half up) or ``"truncate"``.
        """
        if self.permutation_count is None:
            scaled = self.mantissa * 10 ** (digits - 1)
            lead = math.floor(scaled) if mode == "truncate" else math.floor(scaled + 0.5)
            exp = self.exponent
        else:
            lead, exp = _leading_digits(self.permutation_count, digits, mode)
        if lead == 10**digits:
            lead //= 10
            exp += 1
        return lead, exp


def _decimal_exponent(value: int) -> int:
    e = int((value.bit_length() - 1) * math.log10(2))
    while 10 ** (e + 1) <= value:
        e += 1
    while 10**e > value:
        e -= 1
    return e


def _leading_digits(value: int, digits: int, mode: str) -> tuple[int, int]:
    e = _decimal_exponent(value)
    shift = e - (digits - 1)
    if shift <= 0:
        return value * 10**-shift, e
    q, rem = divmod(value, 10**shift)
    if mode == "round" and 2 * rem >= 10**shift:
        q += 1
    return q, e


def permutation_space(params: NetworkParams) -> PermutationStats:
    """Count of possible cycle permutations (``n!``) and raw storage size."""
    n = params.node_cnt
    storage = BYTES_PER_INDEX * n
    if n <= EXACT_FACTORIAL_LIMIT:
        count = math.factorial(n)
        e = _decimal_exponent(count)
        shift = max(e - 17, 0)
        mantissa = (count // 10**shift) / 10 ** (e - shift)
        return PermutationStats(n, count, mantissa, e, storage)
    log10 = math.lgamma(n + 1) / math.log(10)
    e = math.floor(log10)
    return PermutationStats(n, None, 10 ** (log10 - e), e, storage)
