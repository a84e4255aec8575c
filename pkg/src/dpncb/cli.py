"""Command-line interface.

    dpncb run   --preset fig_b [--seed N --runs N --out DIR --threads N]
    dpncb run   --config experiment.json [flags override file values]
    dpncb audit --preset scalar_laplace [--trials N --seed N --out DIR]
    dpncb plot  results.csv --out fig.svg [--loglog] [--y COLUMN]

Exit code 0 on success; nonzero with a diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

from .audit import audit_bandit_global, audit_scalar_mechanism, laplace_mechanism
from .exceptions import AuditError, ConfigError, DomainError
from .harness import ExperimentConfig, run_experiment
from .plotting import PlotSpec, emit_plot
from .presets import AUDIT_PRESETS, FIGURE_PRESETS, audit_preset, figure_preset


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpncb", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment grid and write a CSV")
    src = run_p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON experiment config")
    src.add_argument("--preset", choices=FIGURE_PRESETS, help="named figure preset")
    run_p.add_argument("--seed", type=int, help="master seed (overrides config)")
    run_p.add_argument("--runs", type=int, help="runs per cell (overrides config)")
    run_p.add_argument("--out", help="output directory (overrides config)")
    run_p.add_argument("--threads", type=int, help="parallel runs per cell (hint)")
    run_p.add_argument("--plot", action="store_true", help="also render nash_regret vs T")

    audit_p = sub.add_parser("audit", help="run a named empirical privacy audit")
    audit_p.add_argument("--preset", choices=AUDIT_PRESETS, required=True)
    audit_p.add_argument("--trials", type=int, help="override the preset trial count")
    audit_p.add_argument("--seed", type=int, default=0, help="audit master seed")
    audit_p.add_argument("--out", help="directory for the JSON report")

    plot_p = sub.add_parser("plot", help="render polylines from an experiment CSV")
    plot_p.add_argument("csv", help="experiment CSV path")
    plot_p.add_argument("--out", required=True, help="output SVG path")
    plot_p.add_argument("--loglog", action="store_true")
    plot_p.add_argument("--y", default="nash_regret", help="CSV column to plot")

    return parser


def _cmd_run(args) -> int:
    if args.config:
        config = ExperimentConfig.from_json(args.config)
    else:
        config = figure_preset(args.preset)
    updates = {}
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.runs is not None:
        updates["runs_per_cell"] = args.runs
    if args.out is not None:
        updates["output_dir"] = args.out
    if args.threads is not None:
        updates["threads"] = args.threads
    if updates:
        config = dataclasses.replace(config, **updates)
    reports, csv_path = run_experiment(config)
    print(f"wrote {len(reports)} cells to {csv_path}")
    if args.plot:
        svg = emit_plot(csv_path, os.path.splitext(csv_path)[0] + ".svg")
        print(f"wrote {svg}")
    return 0


def _cmd_audit(args) -> int:
    preset = audit_preset(args.preset, trials=args.trials, master_seed=args.seed)
    kind = preset.pop("kind")
    if kind == "scalar":
        mechanism = laplace_mechanism(preset.pop("epsilon"), preset.pop("scale_factor"))
        report = audit_scalar_mechanism(
            mechanism,
            preset["x"],
            preset["x_prime"],
            preset["epsilon_target"],
            preset["config"],
            master_seed=preset["master_seed"],
        )
    else:
        report = audit_bandit_global(
            preset["policy"],
            preset["params"],
            preset["tape"],
            preset["tape_prime"],
            preset["epsilon_target"],
            preset["config"],
            master_seed=preset["master_seed"],
        )
    print(report.summary())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"audit_{args.preset}.json")
        doc = dataclasses.asdict(report)
        doc["preset"] = args.preset
        for key, val in doc.items():
            if isinstance(val, float) and math.isinf(val):
                doc[key] = "inf"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")
    return 0


def _cmd_plot(args) -> int:
    out = emit_plot(args.csv, args.out, PlotSpec(y_column=args.y, loglog=args.loglog))
    print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "audit":
            return _cmd_audit(args)
        return _cmd_plot(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AuditError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
