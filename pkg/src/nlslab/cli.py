"""Command line interface.

    nlslab <subcommand> --config path [--out dir] [--seed n]
           [--sweep key=start:stop:steps] [--allow-conservative]

Subcommands are the experiment names (simulate, steady, nudge, wmap, form,
bounds, modes, verify).  Exit codes: 0 pass, 1 assertion failure, 2 config
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .bounds import BoundsInput, compute_report
from .errors import ConfigError, NlsLabError
from .harness import EXPERIMENTS, load_config, parse_config, run, write_json

EXIT_PASS = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlslab",
                                     description="damped driven NLS laboratory")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name not in ("verify",)),
                       help="experiment config JSON (for 'bounds'/'modes': a "
                            "BoundsInput JSON or a full config)")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the first seed")
        p.add_argument("--sweep", default=None,
                       help="key=start:stop:steps, log-spaced sweep of a bounds_input key")
        p.add_argument("--allow-conservative", action="store_true",
                       help="permit gamma = 0 diagnostic runs")
    return parser


def _load(args) -> "ExperimentConfig":
    path = Path(args.config)
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if args.experiment in ("bounds", "modes") and "schema_version" not in obj:
        # bare BoundsInput JSON
        obj = {"schema_version": 1, "experiment": args.experiment, "bounds_input": obj}
    obj["experiment"] = args.experiment
    if args.allow_conservative and "params" in obj:
        obj["params"]["allow_conservative"] = True
    cfg = parse_config(obj, out_dir=args.out)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seeds=(args.seed,) + tuple(cfg.seeds[1:]))
    return cfg


def _parse_sweep(spec: str) -> tuple[str, np.ndarray]:
    try:
        key, rng = spec.split("=", 1)
        lo, hi, steps = rng.split(":")
        values = np.geomspace(float(lo), float(hi), int(steps))
    except ValueError as exc:
        raise ConfigError("--sweep", f"expected key=start:stop:steps, got {spec!r}") from exc
    if float(lo) <= 0:
        raise ConfigError("--sweep", "sweep endpoints must be positive (log spacing)")
    return key, values


def _sweep_bounds(cfg, key: str, values: np.ndarray, out_dir: Path) -> int:
    if cfg.bounds_input is None:
        raise ConfigError("--sweep", "sweeps need a bounds_input section")
    if key not in cfg.bounds_input.__dataclass_fields__:
        raise ConfigError("--sweep", f"unknown bounds_input key {key!r}")
    rows = []
    for val in values:
        b = dataclasses.replace(cfg.bounds_input, **{key: float(val)})
        rep = compute_report(b)
        rows.append((val, rep))
    out_dir.mkdir(parents=True, exist_ok=True)
    cols = ["r0t", "r1tt", "r2t", "r0", "r1", "r2", "rprime", "rinf",
            "r0_0", "r1_0", "r2_0", "rprime_0", "rinf_0",
            "k8", "k9", "k10", "k11", "lw_at_m_star"]
    path = out_dir / f"bounds_sweep_{key}.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        import csv
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow([key] + cols)
        for val, rep in rows:
            writer.writerow([format(val, ".17g")]
                            + [format(getattr(rep, c), ".17g") for c in cols])
    print(f"wrote {path}")
    return EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.experiment == "verify" and args.config is None:
            obj = {"schema_version": 1, "experiment": "verify"}
            cfg = parse_config(obj, out_dir=args.out or ".")
        else:
            cfg = _load(args)
        if args.sweep is not None:
            key, values = _parse_sweep(args.sweep)
            return _sweep_bounds(cfg, key, values, Path(cfg.out_dir))
        manifest = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NlsLabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if manifest.error is not None:
        kind = manifest.error.split(":", 1)[0]
        print(f"experiment failed: {manifest.error}", file=sys.stderr)
        return EXIT_CONFIG if kind == "ConfigError" else EXIT_NUMERICAL
    if not manifest.passed():
        failed = [k for k, v in manifest.assertions.items() if not v]
        print(f"assertions failed: {failed}", file=sys.stderr)
        return EXIT_ASSERTION
    print(f"ok: {cfg.experiment} in {manifest.wall_time_s:.2f} s "
          f"({len(manifest.produced_files)} artifacts in {cfg.out_dir})")
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
