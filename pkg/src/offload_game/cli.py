"""Command-line harness: single traces, seed sweeps, oracle comparisons, PoA studies.

Every invocation writes into one output directory: the scenario(s) involved,
a `config.json` with the tool version and the full invocation, and CSV/JSON
artifacts whose numbers are recomputable from (scenario, seed).  CSV files
use a header row, '.' decimals and '\n' line endings.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

from ._version import __version__
from .baselines import (
    CrossEntropyParams,
    Objective,
    all_cloud_random,
    all_local,
    cross_entropy_optimize,
)
from .dco import RunReport, run_dco
from .errors import InstanceTooLarge, OffloadGameError, SchemaError
from .game import ProfileEvaluator
from .metrics import poa_beneficial, poa_overhead
from .model import AccessModel
from .scenario import GenParams, generate, read_scenario, write_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOO_LARGE = 3

_OBJECTIVES = {
    "max-beneficial": Objective.MAX_BENEFICIAL,
    "min-overhead": Objective.MIN_OVERHEAD,
}


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats: {text!r}") from exc


def _int_range(text: str) -> tuple:
    """Parse 'A..B' (inclusive) or a single integer into (lo, hi)."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    value = int(text)
    return value, value


def _add_gen_params(parser: argparse.ArgumentParser):
    defaults = GenParams()
    parser.add_argument("--n-users", type=int, default=defaults.n_users)
    parser.add_argument("--channels", type=int, default=defaults.channels)
    parser.add_argument("--cell-radius-m", type=float, default=defaults.cell_radius_m)
    parser.add_argument("--path-loss-exponent", type=float, default=defaults.path_loss_exponent)
    parser.add_argument("--bandwidth-hz", type=float, default=defaults.bandwidth_hz)
    parser.add_argument("--noise-dbm", type=float, default=defaults.noise_dbm)
    parser.add_argument("--transmit-power-mw", type=float, default=defaults.transmit_power_mw)
    parser.add_argument("--input-kb", type=float, default=defaults.input_kb)
    parser.add_argument("--task-megacycles", type=float, default=defaults.task_megacycles)
    parser.add_argument(
        "--device-rate-choices-ghz", type=_float_list, default=defaults.device_rate_choices_ghz
    )
    parser.add_argument("--cloud-rate-ghz", type=float, default=defaults.cloud_rate_ghz)
    parser.add_argument(
        "--energy-weight-choices", type=_float_list, default=defaults.energy_weight_choices
    )
    parser.add_argument("--energy-per-cycle-j", type=float, default=defaults.energy_per_cycle_j)
    parser.add_argument("--tail-energy-j", type=float, default=defaults.tail_energy_j)
    parser.add_argument(
        "--access-model",
        choices=[m.value for m in AccessModel],
        default=defaults.access_model.value,
    )
    parser.add_argument(
        "--contention-weight-choices",
        type=_float_list,
        default=defaults.contention_weight_choices,
    )
    parser.add_argument(
        "--contention-peak-rate-bps", type=float, default=defaults.contention_peak_rate_bps
    )


def _params_from_args(args: argparse.Namespace, **overrides) -> GenParams:
    params = GenParams(
        n_users=args.n_users,
        channels=args.channels,
        cell_radius_m=args.cell_radius_m,
        path_loss_exponent=args.path_loss_exponent,
        bandwidth_hz=args.bandwidth_hz,
        noise_dbm=args.noise_dbm,
        transmit_power_mw=args.transmit_power_mw,
        input_kb=args.input_kb,
        task_megacycles=args.task_megacycles,
        device_rate_choices_ghz=args.device_rate_choices_ghz,
        cloud_rate_ghz=args.cloud_rate_ghz,
        energy_weight_choices=args.energy_weight_choices,
        energy_per_cycle_j=args.energy_per_cycle_j,
        tail_energy_j=args.tail_energy_j,
        access_model=AccessModel(args.access_model),
        contention_weight_choices=args.contention_weight_choices,
        contention_peak_rate_bps=args.contention_peak_rate_bps,
    )
    return replace(params, **overrides) if overrides else params


def _worker_count(args: argparse.Namespace) -> int:
    workers = max(1, getattr(args, "workers", 1))
    cap = os.environ.get("OFFLOAD_GAME_THREADS")
    if cap:
        workers = min(workers, max(1, int(cap)))
    return workers


def _map_cells(func, cells, workers: int):
    if workers <= 1 or len(cells) <= 1:
        return [func(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, cells, chunksize=max(1, len(cells) // (workers * 4))))


def _prepare_out_dir(args: argparse.Namespace, command: str) -> Path:
    out = Path(args.out) if args.out else Path("runs") / command
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload):
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else v for v in row])


def _write_config(out: Path, command: str, args: argparse.Namespace):
    options = {
        k: (str(v) if isinstance(v, Path) else list(v) if isinstance(v, tuple) else v)
        for k, v in vars(args).items()
        if k != "func"
    }
    _write_json(
        out / "config.json",
        {"tool": "offload-game", "version": __version__, "command": command, "options": options},
    )


def report_document(report: RunReport, config: dict | None = None) -> dict:
    """JSON form of a run report; the slot list mirrors slots.csv plus the profiles."""
    return {
        "meta": {
            "tool": "offload-game",
            "version": __version__,
            "seed": report.seed,
            "scenario_fingerprint": report.scenario_fingerprint,
            "config": config or {},
        },
        "result": {
            "final_profile": list(report.final_profile),
            "update_slots": report.update_slots,
            "total_slots": report.total_slots,
            "is_nash": report.nash_terminal,
            "beneficial_count": report.beneficial_count,
            "system_overhead": report.system_overhead,
        },
        "slots": [
            {
                "slot": rec.slot,
                "profile": list(rec.profile),
                "potential": rec.potential,
                "system_overhead": rec.system_overhead,
                "beneficial_count": rec.beneficial_count,
                "overheads": list(rec.overheads),
                "rtu_senders": list(rec.rtu_senders),
                "updater": rec.updater,
                "new_decision": rec.new_decision,
            }
            for rec in report.slots
        ],
    }


def write_slots_csv(path: Path, report: RunReport):
    _write_csv(
        path,
        ["slot", "phi", "system_overhead", "beneficial_count", "updater", "new_decision"],
        [
            [rec.slot, rec.potential, rec.system_overhead, rec.beneficial_count,
             rec.updater, rec.new_decision]
            for rec in report.slots
        ],
    )


def cmd_gen(args: argparse.Namespace) -> int:
    out = _prepare_out_dir(args, "gen")
    scenario = generate(_params_from_args(args), args.seed)
    write_scenario(out / "scenario.json", scenario)
    _write_config(out, "gen", args)
    print(f"wrote {out / 'scenario.json'}")
    return EXIT_OK


def cmd_trace(args: argparse.Namespace) -> int:
    out = _prepare_out_dir(args, "trace")
    scenario = read_scenario(args.scenario)
    report = run_dco(scenario, args.seed)
    write_scenario(out / "scenario.json", scenario)
    _write_config(out, "trace", args)
    _write_json(out / "report.json", report_document(report))
    write_slots_csv(out / "slots.csv", report)
    print(
        f"converged after {report.update_slots} update slots; "
        f"{report.beneficial_count} beneficial offloaders, "
        f"system overhead {report.system_overhead:.6g}"
    )
    return EXIT_OK


def _sweep_cell(cell) -> dict:
    params, n, seed = cell
    scenario = generate(replace(params, n_users=n), seed)
    evaluator = ProfileEvaluator(scenario.channel_env, scenario.user_profiles)
    report = run_dco(scenario, seed)
    local_cost = float(evaluator.system_overheads([all_local(scenario)])[0])
    random_profile = all_cloud_random(scenario, seed)
    return {
        "n": n,
        "seed": seed,
        "dco_beneficial": report.beneficial_count,
        "dco_system_overhead": report.system_overhead,
        "dco_update_slots": report.update_slots,
        "all_local_overhead": local_cost,
        "all_cloud_beneficial": int(evaluator.beneficial_counts([random_profile])[0]),
        "all_cloud_overhead": float(evaluator.system_overheads([random_profile])[0]),
    }


def cmd_sweep(args: argparse.Namespace) -> int:
    out = _prepare_out_dir(args, "sweep")
    lo, hi = args.n
    sizes = list(range(lo, hi + 1, args.step))
    if not sizes:
        raise ValueError(f"empty user-count range {lo}..{hi} step {args.step}")
    params = _params_from_args(args)
    cells = [(params, n, seed) for n in sizes for seed in range(args.seed_base, args.seed_base + args.seeds)]
    rows = _map_cells(_sweep_cell, cells, _worker_count(args))
    rows.sort(key=lambda r: (r["n"], r["seed"]))
    run_header = [
        "n", "seed", "dco_beneficial", "dco_system_overhead", "dco_update_slots",
        "all_local_overhead", "all_cloud_beneficial", "all_cloud_overhead",
    ]
    _write_csv(out / "runs.csv", run_header, [[r[k] for k in run_header] for r in rows])
    summary = []
    for n in sizes:
        group = [r for r in rows if r["n"] == n]
        count = len(group)
        summary.append(
            [
                n,
                count,
                sum(r["dco_beneficial"] for r in group) / count,
                sum(r["dco_system_overhead"] for r in group) / count,
                sum(r["dco_update_slots"] for r in group) / count,
                sum(r["all_local_overhead"] for r in group) / count,
                sum(r["all_cloud_beneficial"] for r in group) / count,
                sum(r["all_cloud_overhead"] for r in group) / count,
            ]
        )
    _write_csv(
        out / "summary.csv",
        [
            "n", "seeds", "mean_dco_beneficial", "mean_dco_system_overhead",
            "mean_dco_update_slots", "mean_all_local_overhead",
            "mean_all_cloud_beneficial", "mean_all_cloud_overhead",
        ],
        summary,
    )
    _write_config(out, "sweep", args)
    print(f"wrote {out / 'summary.csv'} ({len(rows)} runs)")
    return EXIT_OK


def _oracle_cell(cell) -> dict:
    params, seed, profile_cap, ce_params = cell
    scenario = generate(params, seed)
    report = run_dco(scenario, seed)
    beneficial = poa_beneficial(scenario, profile_cap)
    overhead = poa_overhead(scenario, profile_cap)
    _, ce_max = cross_entropy_optimize(scenario, Objective.MAX_BENEFICIAL, ce_params, seed)
    _, ce_min = cross_entropy_optimize(scenario, Objective.MIN_OVERHEAD, ce_params, seed)
    return {
        "seed": seed,
        "n": params.n_users,
        "m": params.channels,
        "dco_beneficial": report.beneficial_count,
        "dco_overhead": report.system_overhead,
        "dco_update_slots": report.update_slots,
        "opt_beneficial": int(beneficial.optimum),
        "opt_overhead": overhead.optimum,
        "ce_beneficial": ce_max,
        "ce_overhead": ce_min,
        "poa_beneficial": beneficial.ratio,
        "poa_overhead": overhead.ratio,
    }


def cmd_oracle(args: argparse.Namespace) -> int:
    out = _prepare_out_dir(args, "oracle")
    params = _params_from_args(args, n_users=args.n, channels=args.m)
    ce_params = _ce_params_from_args(args)
    cells = [
        (params, seed, args.profile_cap, ce_params)
        for seed in range(args.seed_base, args.seed_base + args.seeds)
    ]
    rows = _map_cells(_oracle_cell, cells, _worker_count(args))
    rows.sort(key=lambda r: r["seed"])
    header = [
        "seed", "n", "m", "dco_beneficial", "dco_overhead", "dco_update_slots",
        "opt_beneficial", "opt_overhead", "ce_beneficial", "ce_overhead",
        "poa_beneficial", "poa_overhead",
    ]
    _write_csv(out / "summary.csv", header, [[r[k] for k in header] for r in rows])
    _write_config(out, "oracle", args)
    print(f"wrote {out / 'summary.csv'} ({len(rows)} instances)")
    return EXIT_OK


def _poa_cell(cell) -> dict:
    params, seed, profile_cap = cell
    scenario = generate(params, seed)
    beneficial = poa_beneficial(scenario, profile_cap)
    overhead = poa_overhead(scenario, profile_cap)
    return {
        "seed": seed,
        "n": params.n_users,
        "m": params.channels,
        "poa_beneficial": beneficial.ratio,
        "beneficial_bound_low": beneficial.bound_low,
        "poa_overhead": overhead.ratio,
        "overhead_bound_high": overhead.bound_high,
        "weight_max": beneficial.weight_max,
        "weight_min": beneficial.weight_min,
        "threshold_max": beneficial.threshold_max,
        "threshold_min": beneficial.threshold_min,
    }


def cmd_poa(args: argparse.Namespace) -> int:
    out = _prepare_out_dir(args, "poa")
    params = _params_from_args(args, n_users=args.n, channels=args.m)
    cells = [
        (params, seed, args.profile_cap)
        for seed in range(args.seed_base, args.seed_base + args.seeds)
    ]
    rows = _map_cells(_poa_cell, cells, _worker_count(args))
    rows.sort(key=lambda r: r["seed"])
    header = [
        "seed", "n", "m", "poa_beneficial", "beneficial_bound_low",
        "poa_overhead", "overhead_bound_high",
        "weight_max", "weight_min", "threshold_max", "threshold_min",
    ]
    _write_csv(out / "summary.csv", header, [[r[k] for k in header] for r in rows])
    _write_config(out, "poa", args)
    print(f"wrote {out / 'summary.csv'} ({len(rows)} instances)")
    return EXIT_OK


def _ce_params_from_args(args: argparse.Namespace) -> CrossEntropyParams:
    return CrossEntropyParams(
        samples=args.ce_samples,
        elite_fraction=args.ce_elite_fraction,
        smoothing=args.ce_smoothing,
        iterations=args.ce_iterations,
    )


def _add_ce_params(parser: argparse.ArgumentParser):
    defaults = CrossEntropyParams()
    parser.add_argument("--ce-samples", type=int, default=defaults.samples)
    parser.add_argument("--ce-elite-fraction", type=float, default=defaults.elite_fraction)
    parser.add_argument("--ce-smoothing", type=float, default=defaults.smoothing)
    parser.add_argument("--ce-iterations", type=int, default=defaults.iterations)


def cmd_ce(args: argparse.Namespace) -> int:
    out = _prepare_out_dir(args, "ce")
    scenario = read_scenario(args.scenario)
    objective = _OBJECTIVES[args.objective]
    ce_params = _ce_params_from_args(args)
    profile, value = cross_entropy_optimize(scenario, objective, ce_params, args.seed)
    write_scenario(out / "scenario.json", scenario)
    _write_config(out, "ce", args)
    _write_json(
        out / "report.json",
        {
            "meta": {"tool": "offload-game", "version": __version__, "seed": args.seed},
            "objective": args.objective,
            "value": value,
            "profile": list(profile),
            "params": asdict(ce_params),
        },
    )
    print(f"{args.objective} = {value}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="offload-game",
        description="Multi-user computation offloading: traces, sweeps, oracles, efficiency studies.",
    )
    parser.add_argument("--version", action="version", version=f"offload-game {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a scenario file")
    _add_gen_params(gen)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", type=Path, default=None)
    gen.set_defaults(func=cmd_gen)

    trace = sub.add_parser("trace", help="run one seeded trace of the distributed algorithm")
    trace.add_argument("--scenario", type=Path, required=True)
    trace.add_argument("--seed", type=int, required=True)
    trace.add_argument("--out", type=Path, default=None)
    trace.set_defaults(func=cmd_trace)

    sweep = sub.add_parser("sweep", help="multi-seed sweep over user counts")
    _add_gen_params(sweep)
    sweep.add_argument("--n", type=_int_range, required=True, metavar="LO..HI")
    sweep.add_argument("--step", type=int, default=5)
    sweep.add_argument("--seeds", type=int, default=100)
    sweep.add_argument("--seed-base", type=int, default=0)
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--out", type=Path, default=None)
    sweep.set_defaults(func=cmd_sweep)

    oracle = sub.add_parser("oracle", help="compare the distributed result with exhaustive/CE optima")
    _add_gen_params(oracle)
    _add_ce_params(oracle)
    oracle.add_argument("--n", type=int, required=True)
    oracle.add_argument("--m", type=int, required=True)
    oracle.add_argument("--seeds", type=int, default=50)
    oracle.add_argument("--seed-base", type=int, default=0)
    oracle.add_argument("--profile-cap", type=int, default=10**7)
    oracle.add_argument("--workers", type=int, default=1)
    oracle.add_argument("--out", type=Path, default=None)
    oracle.set_defaults(func=cmd_oracle)

    poa = sub.add_parser("poa", help="price-of-anarchy study on enumerable instances")
    _add_gen_params(poa)
    poa.add_argument("--n", type=int, required=True)
    poa.add_argument("--m", type=int, required=True)
    poa.add_argument("--seeds", type=int, default=50)
    poa.add_argument("--seed-base", type=int, default=0)
    poa.add_argument("--profile-cap", type=int, default=10**7)
    poa.add_argument("--workers", type=int, default=1)
    poa.add_argument("--out", type=Path, default=None)
    poa.set_defaults(func=cmd_poa)

    ce = sub.add_parser("ce", help="cross-entropy optimization of one scenario")
    ce.add_argument("--scenario", type=Path, required=True)
    ce.add_argument("--objective", choices=sorted(_OBJECTIVES), required=True)
    ce.add_argument("--seed", type=int, default=0)
    _add_ce_params(ce)
    ce.add_argument("--out", type=Path, default=None)
    ce.set_defaults(func=cmd_ce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (SchemaError, OffloadGameError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
