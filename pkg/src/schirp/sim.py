"""Discrete-round swarm simulator.

One tick is one round. Honest agents pair with :func:`pair_target_secure`
under the shared cycle permutation; rogue agents spoof sender indices and
are accepted only when the claimed sender is the victim's own computed
partner for that round.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ._backend import kernels
from .pairing import NetworkParams
from .permutation import CyclePermutation, SplitMix64, identity_cycle, shuffle_fisher_yates
from .sync import AdmissionCheck, SyncObservation, SyncState, check_admission, infer_round

log = logging.getLogger(__name__)

DEFAULT_CONFIRMATIONS = 3


class ScenarioError(ValueError):
    pass


class RogueStrategy(enum.Enum):
    IDENTITY_CYCLE = "identity_cycle"
    WRONG_SEED = "wrong_seed"
    UNIFORM_RANDOM = "uniform_random"
    SHARED_CYCLE = "shared_cycle"


@dataclass(frozen=True)
class RogueConfig:
    """Adversary population.

    ``WRONG_SEED`` rogues run the seeded shuffle with guessed seeds derived
    from ``seed``, drawing a fresh guess every cycle. ``SHARED_CYCLE``
    rogues hold the legitimate cycle (a leaked key).
    """

    count: int
    strategy: RogueStrategy
    seed: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise ScenarioError(f"rogue count must be >= 0, got {self.count}")


class EventKind(enum.Enum):
    NODE_LOSS = "loss"
    NODE_ENTRY = "entry"
    ROGUE_ATTACH = "rogue_attach"
    ROGUE_DETACH = "rogue_detach"


@dataclass(frozen=True)
class SimEvent:
    tick: int
    kind: EventKind
    value: int

    def __str__(self):
        return f"{self.kind.value}({self.value}) at tick {self.tick}"


@dataclass
class SimScenario:
    params: NetworkParams
    cycle: Optional[CyclePermutation] = None
    initial_nodes: Optional[Iterable[int]] = None
    events: Sequence[SimEvent] = ()
    cycles_to_run: int = 1
    rogue_config: Optional[RogueConfig] = None
    rng_seed: int = 0
    required_confirmations: int = DEFAULT_CONFIRMATIONS

    def __post_init__(self):
        n = self.params.node_cnt
        if self.cycle is None:
            self.cycle = identity_cycle(self.params)
        if self.initial_nodes is None:
            self.initial_nodes = range(n)
        self.initial_nodes = tuple(int(x) for x in self.initial_nodes)
        self.events = tuple(self.events)

    @property
    def total_ticks(self) -> int:
        return self.cycles_to_run * self.params.node_cnt

    def validate(self) -> None:
        n = self.params.node_cnt
        if self.cycles_to_run < 1:
            raise ScenarioError("cycles_to_run must be >= 1 (nothing to run)")
        if self.cycle.node_cnt != n:
            raise ScenarioError(f"cycle has {self.cycle.node_cnt} entries, capacity is {n}")
        present: set[int] = set()
        for x in self.initial_nodes:
            if not 0 <= x < n:
                raise ScenarioError(f"initial node {x} outside [0, {n})")
            verdict = check_admission(self.params, present, x)
            if verdict is not AdmissionCheck.ADMIT:
                raise ScenarioError(f"initial node {x} rejected: {verdict.value}")
            present.add(x)
        last = -1
        for i, ev in enumerate(self.events):
            if ev.tick < last:
                raise ScenarioError(f"event {i} ({ev}) is out of tick order")
            if not 0 <= ev.tick < self.total_ticks:
                raise ScenarioError(f"event {i} ({ev}) falls outside the {self.total_ticks} simulated ticks")
            if ev.kind in (EventKind.NODE_LOSS, EventKind.NODE_ENTRY) and not 0 <= ev.value < n:
                raise ScenarioError(f"event {i} ({ev}) names a node outside [0, {n})")
            if ev.kind in (EventKind.ROGUE_ATTACH, EventKind.ROGUE_DETACH):
                if ev.value < 0:
                    raise ScenarioError(f"event {i} ({ev}) has a negative count")
                if self.rogue_config is None:
                    raise ScenarioError(f"event {i} ({ev}) needs a rogue configuration")
            last = ev.tick


@dataclass
class CycleMetrics:
    cycle_index: int
    edges_completed: int = 0
    expected_edges: int = 0
    ce_loss_observed: float = 0.0
    rogue_attempts: int = 0
    rogue_accepted: int = 0
    joins_synchronized: int = 0
    idle_slots: int = field(default=0, repr=False)
    live_slots: int = field(default=0, repr=False)

    FIELDS = (
        "cycle_index",
        "edges_completed",
        "expected_edges",
        "ce_loss_observed",
        "rogue_attempts",
        "rogue_accepted",
        "joins_synchronized",
    )

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}


@dataclass(frozen=True)
class RogueAttempt:
    tick: int
    claimed: int
    victim: int
    victim_partner: Optional[int]
    accepted: bool


class Simulator:
    """Stepwise runner behind :func:`run_scenario`; exposes node state for inspection."""

    def __init__(self, scenario: SimScenario, record_attempts: bool = False):
        scenario.validate()
        self.scenario = scenario
        self.n = n = scenario.params.node_cnt
        self.order = np.ascontiguousarray(scenario.cycle.order, dtype=np.uint32)
        self.alive = np.zeros(n, dtype=np.uint8)
        self.synced = np.zeros(n, dtype=bool)
        # believed round = (true round + offset) mod n, for synchronized nodes
        self.offset = np.zeros(n, dtype=np.int64)
        for x in scenario.initial_nodes:
            self.alive[x] = 1
            self.synced[x] = True
        self.joiners: dict[int, SyncState] = {}
        self.sync_ticks: dict[int, int] = {}
        self.rng = SplitMix64(scenario.rng_seed)
        self.rogue_count = scenario.rogue_config.count if scenario.rogue_config else 0
        self._rogue_orders: list[np.ndarray] = []
        self.record_attempts = record_attempts
        self.attempts: list[RogueAttempt] = []
        self.tick = 0
        self._event_pos = 0
        self._seen = np.zeros((n, n), dtype=np.uint8)
        self.metrics: list[CycleMetrics] = []
        self._current: Optional[CycleMetrics] = None

    # -- events -------------------------------------------------------------

    def _apply(self, ev: SimEvent) -> None:
        x = ev.value
        if ev.kind is EventKind.NODE_LOSS:
            if not self.alive[x]:
                raise ScenarioError(f"{ev}: node {x} is not alive")
            self.alive[x] = 0
            self.synced[x] = False
            self.joiners.pop(x, None)
        elif ev.kind is EventKind.NODE_ENTRY:
            present = np.flatnonzero(self.alive).tolist()
            verdict = check_admission(self.scenario.params, present, x)
            if verdict is not AdmissionCheck.ADMIT:
                raise ScenarioError(f"{ev}: admission refused ({verdict.value})")
            self.alive[x] = 1
            self.synced[x] = False
            self.joiners[x] = SyncState(
                observer=x,
                params=self.scenario.params,
                cycle=self.scenario.cycle,
                required_confirmations=self.scenario.required_confirmations,
            )
        elif ev.kind is EventKind.ROGUE_ATTACH:
            self.rogue_count += x
        elif ev.kind is EventKind.ROGUE_DETACH:
            if x > self.rogue_count:
                raise ScenarioError(f"{ev}: only {self.rogue_count} rogues attached")
            self.rogue_count -= x
        log.debug("tick %d: %s", self.tick, ev)

    # -- per round ----------------------------------------------------------

    def believed_rounds(self, true_round: int) -> np.ndarray:
        believed = np.full(self.n, -1, dtype=np.int64)
        mask = self.synced & self.alive.astype(bool)
        believed[mask] = (true_round + self.offset[mask]) % self.n
        return believed

    def _targets(self, believed: np.ndarray) -> np.ndarray:
        targets = np.full(self.n, -1, dtype=np.int64)
        mask = believed >= 0
        values = self.order[believed[mask]].astype(np.int64)
        targets[mask] = (values - np.flatnonzero(mask)) % self.n
        return targets

    def _listen(self, tick: int, targets: np.ndarray, cm: CycleMetrics) -> None:
        for x in sorted(self.joiners):
            senders = np.flatnonzero(targets == x)
            senders = senders[senders != x]
            inbound = int(senders[0]) if senders.size else None
            state = infer_round(self.joiners[x], SyncObservation(tick, inbound))
            if state.synchronized:
                true_round = tick % self.n
                self.offset[x] = (state.round_at(tick) - true_round) % self.n
                self.synced[x] = True
                self.sync_ticks[x] = tick
                del self.joiners[x]
                cm.joins_synchronized += 1
                log.debug("tick %d: node %d synchronized", tick, x)

    def _rogue_cycle_orders(self, cycle_index: int) -> None:
        cfg = self.scenario.rogue_config
        if cfg is None:
            return
        params = self.scenario.params
        if cfg.strategy is RogueStrategy.SHARED_CYCLE:
            self._rogue_orders = [self.order]
        elif cfg.strategy is RogueStrategy.IDENTITY_CYCLE:
            self._rogue_orders = [np.arange(self.n, dtype=np.uint32)]
        elif cfg.strategy is RogueStrategy.WRONG_SEED:
            self._rogue_orders = []
            for i in range(self.rogue_count):
                guess = SplitMix64(cfg.seed ^ (cycle_index << 32) ^ i).next()
                self._rogue_orders.append(shuffle_fisher_yates(params, guess).order)
        else:
            self._rogue_orders = []

    def _rogues(self, tick: int, targets: np.ndarray, cm: CycleMetrics) -> None:
        cfg = self.scenario.rogue_config
        if cfg is None or self.rogue_count == 0:
            return
        n = self.n
        r = tick % n
        honest = np.flatnonzero(self.alive)
        if honest.size == 0:
            return
        alive = self.alive
        for i in range(self.rogue_count):
            if cfg.strategy is RogueStrategy.UNIFORM_RANDOM:
                victim = int(honest[self.rng.below(honest.size)])
                claimed = self.rng.below(n - 1)
                if claimed >= victim:
                    claimed += 1
            else:
                if cfg.strategy is RogueStrategy.WRONG_SEED:
                    if i >= len(self._rogue_orders):
                        # attached mid-cycle: guess on the fly
                        guess = SplitMix64(cfg.seed ^ ((tick // n) << 32) ^ i).next()
                        self._rogue_orders.append(
                            shuffle_fisher_yates(self.scenario.params, guess).order
                        )
                    rogue_order = self._rogue_orders[i]
                else:
                    rogue_order = self._rogue_orders[0]
                claimed = self.rng.below(n)
                victim = (int(rogue_order[r]) - claimed) % n
                if victim == claimed or not alive[victim]:
                    continue
            partner = int(targets[victim])
            accepted = partner >= 0 and partner != victim and partner == claimed
            cm.rogue_attempts += 1
            cm.rogue_accepted += accepted
            if self.record_attempts:
                self.attempts.append(
                    RogueAttempt(tick, claimed, victim, partner if partner >= 0 else None, accepted)
                )

    def step(self) -> None:
        n = self.n
        tick = self.tick
        r = tick % n
        if r == 0:
            self._current = CycleMetrics(cycle_index=tick // n)
            self._seen[:] = 0
            self._rogue_cycle_orders(tick // n)
        cm = self._current
        events = self.scenario.events
        while self._event_pos < len(events) and events[self._event_pos].tick == tick:
            self._apply(events[self._event_pos])
            self._event_pos += 1

        believed = self.believed_rounds(r)
        new_edges, idle, live, opportunities = kernels.round_step(
            self.order, n, r, self.alive, believed, self._seen
        )
        cm.edges_completed += new_edges
        cm.idle_slots += idle
        cm.live_slots += live
        cm.expected_edges += opportunities

        targets = self._targets(believed)
        self._rogues(tick, targets, cm)
        if self.joiners:
            self._listen(tick, targets, cm)

        self.tick += 1
        if self.tick % n == 0:
            cm.ce_loss_observed = cm.idle_slots / cm.live_slots if cm.live_slots else 0.0
            self.metrics.append(cm)

    def run(self) -> list[CycleMetrics]:
        while self.tick < self.scenario.total_ticks:
            self.step()
        return self.metrics

    def cycle_edges(self) -> set[tuple[int, int]]:
        """Unordered edges completed so far in the current (or just finished) cycle."""
        xs, ys = np.nonzero(self._seen)
        return set(zip(xs.tolist(), ys.tolist()))


def run_scenario(scenario: SimScenario) -> list[CycleMetrics]:
    return Simulator(scenario).run()


def measure_rogue_acceptance(scenario: SimScenario) -> float:
    """Pooled ``accepted / attempts`` over every simulated cycle."""
    if scenario.rogue_config is None or scenario.rogue_config.count < 1:
        raise ScenarioError("measuring rogue acceptance needs at least one rogue")
    metrics = run_scenario(scenario)
    attempts = sum(m.rogue_attempts for m in metrics)
    if attempts == 0:
        raise ZeroDivisionError("no rogue attempts reached a live node")
    return sum(m.rogue_accepted for m in metrics) / attempts


# -- schedule rendering -------------------------------------------------------

SCHEDULE_FORMATS = ("text", "csv")


def dump_schedule(
    source: Union[SimScenario, CyclePermutation], format: str = "text", start_round: int = 0
) -> str:
    """Render the per-round target matrix; self-loops print as ``-``.

    Rows run from ``start_round`` and wrap around the cycle.
    """
    from .pairing import build_schedule

    if format not in SCHEDULE_FORMATS:
        raise ValueError(f"unsupported schedule format {format!r}; choose from {SCHEDULE_FORMATS}")
    cycle = source.cycle if isinstance(source, SimScenario) else source
    params = cycle.params
    n = params.node_cnt
    matrix = build_schedule(params, cycle.order).matrix
    header = ["round", "value"] + [str(x) for x in range(n)]
    rows = []
    for k in range(n):
        r = (start_round + k) % n
        cells = ["-" if t < 0 else str(t) for t in matrix[r].tolist()]
        rows.append([str(r), str(int(cycle.order[r]))] + cells)
    if format == "csv":
        return "\n".join(",".join(row) for row in [header] + rows) + "\n"
    table = [header] + rows
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in table]
    return "\n".join(lines) + "\n"
