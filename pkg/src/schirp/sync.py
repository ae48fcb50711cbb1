"""Mid-cycle join: recover the current round from inbound partner indices."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .pairing import DomainError, NetworkParams
from .permutation import CyclePermutation, identity_cycle

DEFAULT_CONFIRMATIONS = 3


@dataclass(frozen=True)
class SyncObservation:
    local_tick: int
    inbound: Optional[int] = None


@dataclass
class SyncState:
    """Listen-only round tracker for one joining node.

    ``candidate_round`` is the round index believed current at ``last_tick``.
    """

    observer: int
    params: NetworkParams
    cycle: Optional[CyclePermutation] = None
    required_confirmations: int = DEFAULT_CONFIRMATIONS
    candidate_round: Optional[int] = None
    consistent_count: int = 0
    last_tick: Optional[int] = None
    history: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.params.check_node(self.observer, "observer")
        if self.cycle is None:
            self.cycle = identity_cycle(self.params)
        elif self.cycle.node_cnt != self.params.node_cnt:
            raise DomainError("cycle length does not match node_cnt")
        if self.required_confirmations < 1:
            raise ValueError("required_confirmations must be >= 1")
        self._inverse = None if self.cycle.is_identity() else self.cycle.inverse

    def round_from_inbound(self, inbound: int) -> int:
        value = (inbound + self.observer) % self.params.node_cnt
        if self._inverse is None:
            return value
        return int(self._inverse[value])

    def round_at(self, tick: int) -> Optional[int]:
        """Candidate round projected forward to ``tick``."""
        if self.candidate_round is None:
            return None
        return (self.candidate_round + tick - self.last_tick) % self.params.node_cnt

    @property
    def synchronized(self) -> bool:
        return is_synchronized(self)


def infer_round(state: SyncState, obs: SyncObservation) -> SyncState:
    """Fold one observation into ``state`` (in place) and return it.

    A consistent inbound index bumps the confirmation count; an inconsistent
    one restarts tracking from the round it implies. Rounds without inbound
    traffic only advance the candidate.
    """
    if state.last_tick is not None and obs.local_tick <= state.last_tick:
        raise ValueError(
            f"tick {obs.local_tick} does not follow last processed tick {state.last_tick}"
        )
    if obs.inbound is not None:
        if not 0 <= obs.inbound < state.params.node_cnt:
            raise DomainError(f"inbound index {obs.inbound} outside [0, {state.params.node_cnt})")
        if obs.inbound == state.observer:
            raise DomainError("inbound index equals the observer's own index")

    expected = state.round_at(obs.local_tick)
    state.last_tick = obs.local_tick
    if obs.inbound is None:
        state.candidate_round = expected
    else:
        observed = state.round_from_inbound(obs.inbound)
        if expected is not None and observed == expected:
            state.consistent_count = min(state.consistent_count + 1, state.required_confirmations)
        else:
            state.consistent_count = 1
        state.candidate_round = observed
    state.history.append(state.candidate_round)
    return state


def observe_trace(state: SyncState, inbound: Iterable[Optional[int]], start_tick: int = 0) -> SyncState:
    for tick, idx in enumerate(inbound, start=start_tick):
        infer_round(state, SyncObservation(tick, idx))
    return state


def is_synchronized(state: SyncState) -> bool:
    return state.consistent_count >= state.required_confirmations


class AdmissionCheck(enum.Enum):
    ADMIT = "admit"
    FULL = "full"
    INDEX_COLLISION = "index-collision"


def check_admission(
    params: NetworkParams, existing: Iterable[int], candidate: int, node_actual: Optional[int] = None
) -> AdmissionCheck:
    """Entry conditions for a new node. A full network wins over an index collision."""
    params.check_node(candidate, "candidate")
    existing = set(existing)
    if node_actual is None:
        node_actual = len(existing)
    elif node_actual != len(existing):
        raise ValueError(f"node_actual={node_actual} but {len(existing)} nodes exist")
    if node_actual >= params.node_cnt:
        return AdmissionCheck.FULL
    if candidate in existing:
        return AdmissionCheck.INDEX_COLLISION
    return AdmissionCheck.ADMIT
