"""Round-robin pairing arithmetic for the unsecured CHIRP protocol.

A node ``x`` in round ``r`` of an ``n``-slot network talks to
``(r - x) mod n``. When that lands on ``x`` itself the node has a
self-loop round and sends nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ._backend import kernels

MAX_NODE_CNT = 2**32


class DomainError(ValueError):
    """An index or capacity outside the legal range."""


@dataclass(frozen=True)
class NetworkParams:
    """Capacity of the index space (``Node_cnt``), fixed per network."""

    node_cnt: int

    def __post_init__(self):
        if not isinstance(self.node_cnt, (int, np.integer)) or isinstance(self.node_cnt, bool):
            raise TypeError(f"node_cnt must be an integer, got {self.node_cnt!r}")
        if not 1 <= self.node_cnt <= MAX_NODE_CNT:
            raise DomainError(f"node_cnt must lie in [1, 2**32], got {self.node_cnt}")
        object.__setattr__(self, "node_cnt", int(self.node_cnt))

    @property
    def n(self) -> int:
        return self.node_cnt

    def check_node(self, idx: int, what: str = "node") -> int:
        if not 0 <= idx < self.node_cnt:
            raise DomainError(f"{what} index {idx} outside [0, {self.node_cnt})")
        return int(idx)

    def check_round(self, r: int) -> int:
        if not 0 <= r < self.node_cnt:
            raise DomainError(f"round {r} outside [0, {self.node_cnt})")
        return int(r)


@dataclass(frozen=True)
class Peer:
    target: int


@dataclass(frozen=True)
class SelfLoop:
    pass


SELF_LOOP = SelfLoop()
PairOutcome = Union[Peer, SelfLoop]


def _outcome(source: int, target: int) -> PairOutcome:
    return SELF_LOOP if target == source else Peer(target)


def min_rounds(params: NetworkParams) -> int:
    """Lower bound on rounds needed to cover K_n: ``n-1`` for even n, ``n`` for odd.

    CHIRP itself always runs ``n`` rounds per cycle; this is informational.
    """
    n = params.node_cnt
    if n < 2:
        raise DomainError(f"no pairs exist for node_cnt={n}")
    return n - 1 if n % 2 == 0 else n


def max_edges_per_round(params: NetworkParams) -> int:
    return params.node_cnt // 2


def pair_target(params: NetworkParams, source: int, round: int) -> PairOutcome:
    source = params.check_node(source, "source")
    round = params.check_round(round)
    return _outcome(source, (round - source) % params.node_cnt)


def recover_round(params: NetworkParams, inbound: int, self_idx: int) -> int:
    """Current round index implied by receiving from ``inbound``."""
    inbound = params.check_node(inbound, "inbound")
    self_idx = params.check_node(self_idx, "self")
    return (inbound + self_idx) % params.node_cnt


@dataclass(frozen=True)
class Schedule:
    """Materialized pairing matrix, ``matrix[r, x]`` is x's target in round r (-1 = self-loop)."""

    params: NetworkParams
    matrix: np.ndarray

    def outcome(self, round: int, source: int) -> PairOutcome:
        t = int(self.matrix[round, source])
        return SELF_LOOP if t < 0 else Peer(t)

    @property
    def rows(self) -> list[list[PairOutcome]]:
        return [
            [SELF_LOOP if t < 0 else Peer(t) for t in row]
            for row in self.matrix.tolist()
        ]

    def edges(self, round: int) -> list[tuple[int, int]]:
        """Unordered pairs ``(x, y)`` with ``x < y`` formed in ``round``."""
        return [(x, t) for x, t in enumerate(self.matrix[round].tolist()) if t > x]


def build_schedule(params: NetworkParams, order=None) -> Schedule:
    """Materialize every round of a cycle.

    ``order`` is the round-value sequence; the identity (plain CHIRP) when omitted.
    """
    n = params.node_cnt
    if order is None:
        order = np.arange(n, dtype=np.uint32)
    m = kernels.schedule_matrix(np.ascontiguousarray(order, dtype=np.uint32), n)
    m.setflags(write=False)
    return Schedule(params, m)


@dataclass(frozen=True)
class EfficiencyReport:
    node_cnt: int
    node_actual: int
    ce_loss_exact: Fraction

    @property
    def ce_loss(self) -> float:
        return float(self.ce_loss_exact)


def communication_efficiency(node_cnt: int, node_actual: int) -> EfficiencyReport:
    """Fraction of pairing slots lost to missing nodes: ``(cnt - actual) / cnt``."""
    if node_cnt < 1:
        raise DomainError(f"node_cnt must be >= 1, got {node_cnt}")
    if not 0 <= node_actual <= node_cnt:
        raise DomainError(f"node_actual={node_actual} outside [0, {node_cnt}]")
    return EfficiencyReport(node_cnt, node_actual, Fraction(node_cnt - node_actual, node_cnt))
