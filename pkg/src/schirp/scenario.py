"""JSON scenario files.

Schema (all keys except ``capacity`` optional)::

    {
      "capacity": 8,                        # Node_cnt
      "cycle": "identity",                  # or {"seed": u64}, {"sattolo": u64},
                                            #    {"values": [...]}, {"file": "x.perm"}
      "initial_nodes": "all",               # or [0, 1, ...] or {"start": 0, "stop": 8}
      "cycles": 1,
      "rng_seed": 0,
      "required_confirmations": 3,
      "rogues": {"count": 0, "strategy": "uniform_random", "seed": 0},
      "events": [
        {"tick": 8, "kind": "loss", "node": 3},
        {"tick": 8, "kind": "loss", "nodes": [4, 5]},
        {"tick": 20, "kind": "entry", "node": 3},
        {"tick": 24, "kind": "rogue_attach", "count": 2}
      ]
    }

Relative cycle file paths resolve against the scenario file's directory.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from .pairing import DomainError, NetworkParams
from .permutation import (
    PermutationError,
    identity_cycle,
    load_cycle,
    read_cycle,
    shuffle_fisher_yates,
    shuffle_sattolo,
)
from .sim import EventKind, RogueConfig, RogueStrategy, ScenarioError, SimEvent, SimScenario

KNOWN_KEYS = {
    "capacity",
    "cycle",
    "initial_nodes",
    "cycles",
    "rng_seed",
    "required_confirmations",
    "rogues",
    "events",
    "description",
}


def _int(value: Any, where: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{where}: must be >= {minimum}, got {value}")
    return value


def parse_cycle(spec: Any, params: NetworkParams, base: Optional[Path] = None, where: str = "cycle"):
    try:
        if spec is None or spec == "identity":
            return identity_cycle(params)
        if isinstance(spec, str):
            # CLI shorthand: identity | seed=<u64> | sattolo=<u64> | file=<path>
            key, sep, val = spec.partition("=")
            if not sep:
                raise ScenarioError(f"{where}: unknown cycle source {spec!r}")
            spec = {key: int(val) if key in ("seed", "sattolo") else val}
        if not isinstance(spec, dict) or len(spec) != 1:
            raise ScenarioError(f"{where}: expected \"identity\" or a single-key object")
        (key, val), = spec.items()
        if key == "seed":
            return shuffle_fisher_yates(params, _int(val, f"{where}.seed", 0))
        if key == "sattolo":
            return shuffle_sattolo(params, _int(val, f"{where}.sattolo", 0))
        if key == "values":
            if not isinstance(val, list):
                raise ScenarioError(f"{where}.values: expected a list")
            return load_cycle(params, val)
        if key == "file":
            path = Path(val)
            if base is not None and not path.is_absolute():
                path = base / path
            return read_cycle(path, params.node_cnt)
        raise ScenarioError(f"{where}: unknown cycle source {key!r}")
    except (PermutationError, DomainError, ValueError, OSError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"{where}: {exc}") from exc


def _initial(spec: Any, n: int) -> list[int]:
    if spec is None or spec == "all":
        return list(range(n))
    if isinstance(spec, dict):
        start = _int(spec.get("start", 0), "initial_nodes.start", 0)
        stop = _int(spec.get("stop", n), "initial_nodes.stop", 0)
        return list(range(start, stop))
    if isinstance(spec, list):
        return [_int(v, f"initial_nodes[{i}]", 0) for i, v in enumerate(spec)]
    raise ScenarioError(f"initial_nodes: expected \"all\", a list or a range object, got {spec!r}")


def _events(raw: Any) -> list[SimEvent]:
    if not isinstance(raw, list):
        raise ScenarioError("events: expected a list")
    out = []
    for i, ev in enumerate(raw):
        where = f"events[{i}]"
        if not isinstance(ev, dict):
            raise ScenarioError(f"{where}: expected an object")
        tick = _int(ev.get("tick"), f"{where}.tick", 0)
        try:
            kind = EventKind(ev.get("kind"))
        except ValueError:
            choices = ", ".join(k.value for k in EventKind)
            raise ScenarioError(f"{where}.kind: {ev.get('kind')!r} is not one of {choices}") from None
        if kind in (EventKind.NODE_LOSS, EventKind.NODE_ENTRY):
            if "nodes" in ev:
                if not isinstance(ev["nodes"], list):
                    raise ScenarioError(f"{where}.nodes: expected a list")
                nodes = [_int(v, f"{where}.nodes[{j}]", 0) for j, v in enumerate(ev["nodes"])]
            else:
                nodes = [_int(ev.get("node"), f"{where}.node", 0)]
            out.extend(SimEvent(tick, kind, x) for x in nodes)
        else:
            out.append(SimEvent(tick, kind, _int(ev.get("count"), f"{where}.count", 0)))
    return out


def scenario_from_dict(data: Any, base: Optional[Path] = None) -> SimScenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario: top level must be an object")
    unknown = sorted(set(data) - KNOWN_KEYS)
    if unknown:
        raise ScenarioError(f"scenario: unknown key(s) {', '.join(unknown)}")
    n = _int(data.get("capacity"), "capacity", 1)
    params = NetworkParams(n)
    rogue_config = None
    if data.get("rogues") is not None:
        rg = data["rogues"]
        if not isinstance(rg, dict):
            raise ScenarioError("rogues: expected an object")
        try:
            strategy = RogueStrategy(rg.get("strategy", "uniform_random"))
        except ValueError:
            choices = ", ".join(s.value for s in RogueStrategy)
            raise ScenarioError(f"rogues.strategy: {rg.get('strategy')!r} is not one of {choices}") from None
        rogue_config = RogueConfig(
            _int(rg.get("count", 0), "rogues.count", 0), strategy, _int(rg.get("seed", 0), "rogues.seed", 0)
        )
    scenario = SimScenario(
        params=params,
        cycle=parse_cycle(data.get("cycle"), params, base),
        initial_nodes=_initial(data.get("initial_nodes"), n),
        events=_events(data.get("events", [])),
        cycles_to_run=_int(data.get("cycles", 1), "cycles"),
        rogue_config=rogue_config,
        rng_seed=_int(data.get("rng_seed", 0), "rng_seed", 0),
        required_confirmations=_int(data.get("required_confirmations", 3), "required_confirmations", 1),
    )
    scenario.validate()
    return scenario


def load_scenario(path) -> SimScenario:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return scenario_from_dict(data, base=path.parent)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
