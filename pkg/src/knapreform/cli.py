"""Command line: ``knapreform {generate,pipeline,experiment}``.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .documents import dumps_instance, loads_instances
from .errors import InstanceError
from .generate import BETA_MODES, GeneratorParams, generate, run_experiment, summary_csv
from .oracle import EnumerationBudget
from .pipeline import CSV_COLUMNS, Options, analyze, build_report, csv_row, exit_code, text_summary

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("knapreform")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    try:
        prm = GeneratorParams(
            n=args.n,
            M=args.bigM,
            density=Fraction(args.density) if args.density is not None else None,
            vmax=args.vmax,
            beta=args.beta,
            hypothesis=args.hypothesis,
        )
        lines = [dumps_instance(inst, prov) for inst, prov in generate(prm, args.count, args.seed)]
    except (ValueError, InstanceError) as e:
        log.error("%s", e)
        return EXIT_INPUT
    _emit("".join(line + "\n" for line in lines), args.out)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    try:
        text = Path(args.instance).read_text() if args.instance != "-" else sys.stdin.read()
        items = loads_instances(text, normalize=args.normalize_gcd)
    except (OSError, InstanceError) as e:
        log.error("input error: %s", e)
        return EXIT_INPUT
    budget = EnumerationBudget(args.max_points, args.max_active_sets)
    opts = Options(k=args.k, oracle=args.oracle, budget=budget, timings=args.timings)
    report = build_report([analyze(inst, opts, prov) for inst, prov in items])
    if args.format == "json":
        text = json.dumps(report, indent=1) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for i, rep in enumerate(report["instances"]):
            w.writerow(csv_row(i, rep))
        text = buf.getvalue()
    else:
        text = text_summary(report) + "\n"
    _emit(text, args.out)
    return exit_code(report)


def cmd_experiment(args) -> int:
    try:
        config = json.loads(Path(args.config).read_text())
        if args.seed is not None:
            config["seed"] = args.seed
        rows, reports = run_experiment(config)
    except (OSError, ValueError, InstanceError) as e:
        log.error("input error: %s", e)
        return EXIT_INPUT
    table = summary_csv(rows)
    if args.out:
        Path(args.out + ".csv").write_text(table)
        summary = {"columns": table.splitlines()[0].split(","), "rows": rows,
                   "all_ok": all(r["ok"] for r in reports)}
        Path(args.out + ".json").write_text(json.dumps(summary, indent=1) + "\n")
    else:
        sys.stdout.write(table)
    return EXIT_OK if all(r["ok"] for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knapreform", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit random instances as JSON lines")
    g.add_argument("-n", type=int, required=True)
    mode = g.add_mutually_exclusive_group(required=True)
    mode.add_argument("--bigM", type=int, help="a_i uniform on 1..M")
    mode.add_argument("--density", help="target density d; M = ceil(2^(n/d))")
    g.add_argument("--vmax", type=int, default=1)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", default="0")
    g.add_argument("--beta", choices=BETA_MODES, default="feasible")
    g.add_argument("--hypothesis", action="store_true", help="only weights with ||a|| >= 2^((n/2+1)n)")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    p = sub.add_parser("pipeline", help="reformulate, certify and measure widths")
    p.add_argument("--instance", required=True, help="instance JSON / JSON lines file, or - for stdin")
    p.add_argument("--oracle", action="store_true", help="cross-check with brute-force oracles")
    p.add_argument("--k", type=int, default=3, help="successive approximation depth")
    p.add_argument("--normalize-gcd", action="store_true")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--max-points", type=int, default=10 ** 7)
    p.add_argument("--max-active-sets", type=int, default=10 ** 6)
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds (non-deterministic)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pipeline)

    e = sub.add_parser("experiment", help="batch pipeline with a summary table")
    e.add_argument("--config", required=True)
    e.add_argument("--seed")
    e.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
