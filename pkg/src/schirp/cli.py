"""Command-line front end: ``schirp {schedule,simulate,perm,verify}``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from ._backend import BACKEND
from .pairing import DomainError, NetworkParams
from .permutation import (
    PermutationError,
    Seeded,
    permutation_space,
    read_cycle,
    shuffle_fisher_yates,
    shuffle_sattolo,
)
from .scenario import load_scenario, parse_cycle
from .sim import CycleMetrics, ScenarioError, SCHEDULE_FORMATS, dump_schedule, run_scenario
from .verify import verify_all

log = logging.getLogger("schirp")


def metrics_csv(metrics: Sequence[CycleMetrics]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CycleMetrics.FIELDS)
    for m in metrics:
        row = m.as_row()
        row["ce_loss_observed"] = f"{m.ce_loss_observed:.6f}"
        writer.writerow(row[k] for k in CycleMetrics.FIELDS)
    return buf.getvalue()


def _write(text: str, output: Optional[str]) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_schedule(args) -> int:
    params = NetworkParams(args.n)
    cycle = parse_cycle(args.cycle, params)
    _write(dump_schedule(cycle, args.format, args.start_round % args.n), args.output)
    return 0


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    metrics = run_scenario(scenario)
    text = metrics_csv(metrics)
    summary_out = sys.stdout
    if args.csv in (None, "-"):
        sys.stdout.write(text)
        summary_out = sys.stderr
    else:
        Path(args.csv).write_text(text, encoding="utf-8")
    edges = sum(m.edges_completed for m in metrics)
    mean_loss = sum(m.ce_loss_observed for m in metrics) / len(metrics)
    attempts = sum(m.rogue_attempts for m in metrics)
    accepted = sum(m.rogue_accepted for m in metrics)
    print(f"cycles: {len(metrics)}", file=summary_out)
    print(f"total edges: {edges}", file=summary_out)
    print("edges per cycle: " + " ".join(str(m.edges_completed) for m in metrics), file=summary_out)
    print(f"mean ce_loss: {mean_loss:.6f}", file=summary_out)
    if attempts:
        print(f"rogue acceptance: {accepted}/{attempts} = {accepted / attempts:.6f}", file=summary_out)
    else:
        print("rogue acceptance: n/a (no attempts)", file=summary_out)
    return 0


def cmd_perm(args) -> int:
    if args.action == "stats":
        stats = permutation_space(NetworkParams(args.n))
        print(f"nodes: {stats.node_cnt}")
        print(f"permutations: {stats.render(3)}")
        if stats.permutation_count is not None and stats.node_cnt <= 20:
            print(f"permutations (exact): {stats.permutation_count}")
        print(f"storage bytes: {stats.storage_bytes}")
        return 0
    if args.action == "generate":
        params = NetworkParams(args.n)
        shuffle = shuffle_sattolo if args.sattolo else shuffle_fisher_yates
        cycle = shuffle(params, args.seed)
        size = cycle.write(args.output)
        if args.manifest:
            prov = cycle.provenance
            manifest = {
                "format": "schirp-permutation",
                "encoding": "uint32-le",
                "node_cnt": cycle.node_cnt,
                "bytes": size,
                "algorithm": prov.algorithm if isinstance(prov, Seeded) else None,
                "generator": "splitmix64",
                "seed": prov.seed if isinstance(prov, Seeded) else None,
                "sha256": hashlib.sha256(cycle.to_bytes()).hexdigest(),
            }
            Path(str(args.output) + ".json").write_text(json.dumps(manifest, indent=2) + "\n")
        print(f"wrote {size} bytes ({cycle.node_cnt} entries) to {args.output}")
        return 0
    # validate
    cycle = read_cycle(args.file, args.n)
    print(f"valid permutation of {cycle.node_cnt} entries")
    return 0


def cmd_verify(args) -> int:
    violation = verify_all(args.max_n, seeds=range(args.seeds))
    if violation is not None:
        print(f"FAIL {violation}", file=sys.stderr)
        print(f"counterexample (n, r, x) = ({violation.n}, {violation.r}, {violation.x})", file=sys.stderr)
        return 1
    print(f"ok: all invariants hold for 2 <= n <= {args.max_n} ({BACKEND} kernels)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schirp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schedule", help="print the per-round pairing matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cycle", default="identity", help="identity | seed=<u64> | sattolo=<u64> | file=<path>")
    p.add_argument("--start-round", type=int, default=0)
    p.add_argument("--format", choices=SCHEDULE_FORMATS, default="text")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("simulate", help="run a scenario file and emit per-cycle metrics CSV")
    p.add_argument("scenario")
    p.add_argument("--csv", help="CSV destination (default: stdout, summary to stderr)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("perm", help="permutation tooling")
    perm = p.add_subparsers(dest="action", required=True)
    g = perm.add_parser("generate")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--sattolo", action="store_true", help="single-cycle permutation")
    g.add_argument("--output", "-o", required=True)
    g.add_argument("--manifest", action="store_true", help="also write <output>.json describing the file")
    v = perm.add_parser("validate")
    v.add_argument("file")
    v.add_argument("--n", type=int)
    s = perm.add_parser("stats")
    s.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("verify", help="brute-force the pairing invariants")
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--seeds", type=int, default=3, help="permuted cycles checked per n")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ScenarioError, PermutationError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
