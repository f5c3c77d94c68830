"""Command line: scenario generation, single runs and batch experiments."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import BaselineConfig, run_dsf, run_index_coding, run_rlnc, run_sin1
from .harness import (GeneratorConfig, canonical_algorithm, sweep_presets, generate_scenario,
                      run_experiment, run_pairwise_experiment)
from .model import InstanceTooLarge, dump_scenario, load_scenario, schedule_to_dict, validate_scenario
from .scheduler import run_rsnc


class CliError(Exception):
    pass


def _read_config(path) -> tuple[GeneratorConfig, list | None]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise CliError("config must be a JSON object")
    sweep = doc.pop("sweep", None)
    if sweep is not None:
        if not isinstance(sweep, list) or not all(isinstance(p, dict) for p in sweep):
            raise CliError("sweep must be a list of objects")
        sweep = [{k: tuple(v) if isinstance(v, list) else v for k, v in p.items()} for p in sweep]
    cfg = GeneratorConfig.from_dict(doc)
    if sweep:
        # surface bad overrides before any work is done
        for p in sweep:
            GeneratorConfig.from_dict({**cfg.to_dict(), **p})
    return cfg, sweep


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_generate(args) -> None:
    cfg, _ = _read_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = len(str(cfg.samples - 1))
    for k in range(cfg.samples):
        dump_scenario(generate_scenario(cfg, k), out / f"scenario_{k:0{width}d}.json")
    print(f"wrote {cfg.samples} scenarios to {out}")


def cmd_run(args) -> None:
    try:
        s = load_scenario(args.scenario)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read scenario {args.scenario}: {exc}") from exc
    report = validate_scenario(s)
    if not report.ok:
        raise CliError("invalid scenario: " + "; ".join(report.violations))
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    algo = canonical_algorithm(args.algorithm)
    if algo == "rsnc":
        sched = run_rsnc(s)
    elif algo == "dsf":
        sched = run_dsf(s)
    elif algo == "sin1":
        sched = run_sin1(s)
    elif algo == "rlnc":
        sched = run_rlnc(s, BaselineConfig("rlnc", seed=args.seed, field_size=args.field_size))
    else:
        sched = run_index_coding(s)
    print(json.dumps(schedule_to_dict(s, sched), indent=2))


def cmd_experiment(args) -> None:
    if args.preset:
        presets = sweep_presets(samples=args.samples or 200, seed=args.seed or 0)
        if args.preset not in presets:
            raise CliError(f"unknown preset {args.preset!r}; choose from {sorted(presets)}")
        cfg, sweep = presets[args.preset]
    elif args.config:
        cfg, sweep = _read_config(args.config)
    else:
        raise CliError("give --config or --preset")
    algos = [a for a in args.algorithms.split(",") if a.strip()]
    _write(run_experiment(cfg, algos, sweep).to_csv(), args.out)


def cmd_pairwise(args) -> None:
    cfg, _ = _read_config(args.config)
    res = run_pairwise_experiment(cfg, args.deadline, oracle=args.oracle)
    _write(res.to_csv(), args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rsnc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write random scenarios as JSON")
    g.add_argument("--config", required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="schedule one scenario and print the result")
    r.add_argument("--scenario", required=True)
    r.add_argument("--algorithm", default="rsnc",
                   choices=["rsnc", "dsf", "sin1", "rlnc", "index", "index_coding"])
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--field-size", type=int, default=256)
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("experiment", help="paired sweep over random scenarios, CSV out")
    e.add_argument("--config")
    e.add_argument("--preset", help="built-in sweep, e.g. rate_range")
    e.add_argument("--samples", type=int, help="sample count for --preset")
    e.add_argument("--seed", type=int, help="seed for --preset")
    e.add_argument("--algorithms", default="rsnc,dsf,sin1")
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_experiment)

    w = sub.add_parser("pairwise", help="greedy pairwise coding against the optimum")
    w.add_argument("--config", required=True)
    w.add_argument("--deadline", type=float, required=True)
    w.add_argument("--oracle", default="auto", choices=["auto", "enumerate", "milp"])
    w.add_argument("--out", default="-")
    w.set_defaults(func=cmd_pairwise)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, InstanceTooLarge, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
