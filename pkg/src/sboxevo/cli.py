"""Command-line entry point: ``sboxevo <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .properties import bct_fast, ddt, property_report
from .sbox import SBoxError, default_field, format_sbox, gold_map, inverse_map, read_sbox


def _report_json(f) -> str:
    return json.dumps(property_report(f).as_dict())


def cmd_evaluate(args) -> int:
    f = read_sbox(args.sbox)
    print(_report_json(f))
    if args.ddt:
        Path(args.ddt).write_text(ddt(f).to_csv())
    if args.bct:
        Path(args.bct).write_text(bct_fast(f).to_csv())
    return 0


def _reference_sbox(n: int, spec: str):
    if spec == "inverse":
        return inverse_map(n, default_field(n))
    if spec.startswith("gold:"):
        return gold_map(n, int(spec[5:]), default_field(n))
    raise SBoxError(f"unknown map {spec!r}; use 'inverse' or 'gold:<i>'")


def cmd_reference(args) -> int:
    f = _reference_sbox(args.n, args.map)
    text = format_sbox(f)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(_report_json(f))
    return 0


def _experiment_config(args, algorithms: list[str]) -> harness.ExperimentConfig:
    values = {}
    if args.config:
        values.update(harness.parse_config_text(Path(args.config).read_text()))
    overrides = {
        "sizes": args.n,
        "encodings": args.encoding,
        "runs": args.runs,
        "base_seed": args.seed,
        "budget": args.budget,
        "pop_size": args.pop,
        "mutation_prob": args.pm,
        "output_dir": args.out,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.paper_budget:
        values["paper_budget"] = True
    values["algorithms"] = algorithms
    return harness.ExperimentConfig(**values)


def _print_summary(records) -> None:
    sys.stdout.write(harness.summary_csv(harness.summarize(records)))


def cmd_evolve(args) -> int:
    cfg = _experiment_config(args, args.algo)
    records = harness.run_experiment(cfg, workers=args.workers)
    if cfg.output_dir:
        harness.write_outputs(records, cfg.output_dir)
    _print_summary(records)
    return 0


def cmd_nsga2(args) -> int:
    cfg = _experiment_config(args, ["nsga2"])
    records = harness.run_experiment(cfg, workers=args.workers)
    if cfg.output_dir:
        harness.write_outputs(records, cfg.output_dir)
    sys.stdout.write(harness.pareto_csv(harness.pareto_union(records)))
    return 0


def cmd_summarize(args) -> int:
    rows = harness.summarize(harness.load_records(args.dir))
    text = harness.summary_json(rows) if args.format == "json" else harness.summary_csv(rows)
    sys.stdout.write(text)
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--encoding", nargs="+", help="int, perm and/or ca")
    p.add_argument("--n", type=int, nargs="+", help="S-box size(s)")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--budget", type=int, help="fitness evaluations per run")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--pm", type=float, help="individual mutation probability")
    p.add_argument("--paper-budget", action="store_true",
                   help="use 500000 evaluations for n >= 7 as well")
    p.add_argument("--out", help="output directory for records and summaries")
    p.add_argument("--config", help="key = value experiment file; flags override it")
    p.add_argument("--workers", type=int, default=1, help="parallel runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sboxevo", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="properties of an S-box file")
    p.add_argument("--sbox", required=True)
    p.add_argument("--ddt", help="write the DDT as CSV to this path")
    p.add_argument("--bct", help="write the BCT as CSV to this path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("reference", help="emit a power-map S-box and its properties")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--map", default="inverse", help="inverse or gold:<i>")
    p.add_argument("--out", help="write the S-box file here instead of stdout")
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("evolve", help="single-objective EA or random search")
    _add_run_options(p)
    p.add_argument("--algo", nargs="+", choices=("ea", "rs"), default=["ea"])
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("nsga2", help="multi-objective search over (beta, delta)")
    _add_run_options(p)
    p.set_defaults(func=cmd_nsga2)

    p = sub.add_parser("summarize", help="summary table of a directory of run records")
    p.add_argument("--dir", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        return args.func(args)
    except (SBoxError, ValueError, OSError) as exc:
        print(f"sboxevo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
