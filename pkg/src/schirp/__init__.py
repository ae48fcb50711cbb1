"""Round-robin peer pairing (CHIRP) with permuted cycles (S-CHIRP) and a swarm simulator."""
from ._backend import BACKEND
from .pairing import (
    SELF_LOOP,
    DomainError,
    EfficiencyReport,
    NetworkParams,
    Peer,
    Schedule,
    SelfLoop,
    build_schedule,
    communication_efficiency,
    max_edges_per_round,
    min_rounds,
    pair_target,
    recover_round,
)
from .permutation import (
    CyclePermutation,
    External,
    PermutationError,
    PermutationStats,
    Seeded,
    SplitMix64,
    identity_cycle,
    load_cycle,
    pair_target_secure,
    permutation_space,
    read_cycle,
    shuffle_fisher_yates,
    shuffle_sattolo,
)
from .sim import (
    CycleMetrics,
    EventKind,
    RogueConfig,
    RogueStrategy,
    ScenarioError,
    SimEvent,
    SimScenario,
    Simulator,
    dump_schedule,
    measure_rogue_acceptance,
    run_scenario,
)
from .sync import (
    AdmissionCheck,
    SyncObservation,
    SyncState,
    check_admission,
    infer_round,
    is_synchronized,
)

__version__ = "0.1.0"
