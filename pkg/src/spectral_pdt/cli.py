"""Command-line entry point.

Exit codes: 0 success, 1 sweep row failure, 2 input error,
3 invariant or lemma violation, 4 certificate failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import families, harness
from .errors import InputError, InvariantError
from .formats import parse_anf
from .spectrum import BooleanFunction

EXIT_OK, EXIT_ROWS, EXIT_INPUT, EXIT_INVARIANT, EXIT_CERT = 0, 1, 2, 3, 4


def _load_function(args) -> tuple[BooleanFunction, str]:
    given = [x for x in (args.table, args.anf, args.family) if x is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --table, --anf, --family")
    if args.table is not None:
        with open(args.table) as fh:
            return BooleanFunction.from_hex(fh.read(), args.n), f"table:{args.table}"
    if args.anf is not None:
        text = args.anf
        if os.path.isfile(text):
            with open(text) as fh:
                text = fh.read()
        return parse_anf(text.strip(), args.n), f"anf:{text.strip()}"
    try:
        spec = json.loads(args.family)
    except json.JSONDecodeError as exc:
        raise InputError(f"--family is not JSON: {exc}")
    return families.from_spec(spec), "family:" + json.dumps(spec, sort_keys=True)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    f, desc = _load_function(args)
    report = harness.analyze(f, desc)
    _emit(harness.dumps(report.to_json()), args.out)
    return EXIT_OK if report.status == "OK" else EXIT_INVARIANT


def cmd_procedure(args) -> int:
    f, desc = _load_function(args)
    outcome = harness.procedure(f, desc, args.tau, args.finder, args.selector, args.seed)
    if args.out:
        harness.write_artifacts(args.out, {
            "trace.csv": outcome.trace_csv,
            "trace.json": harness.dumps(outcome.trace_json),
            "certificate.json": harness.dumps(outcome.certificate_json),
            "summary.json": harness.dumps(outcome.summary),
        })
    sys.stdout.write(harness.dumps(outcome.summary))
    return outcome.exit_code


def cmd_sweep(args) -> int:
    text = args.families
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    try:
        specs = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--families is not JSON: {exc}")
    if not isinstance(specs, list):
        raise InputError("--families must be a JSON list")
    taus = [t.strip() for t in args.taus.split(",") if t.strip()]
    rows, summary = harness.sweep(specs, taus, args.finder, args.jobs)
    csv_text = harness.rows_to_csv(rows)
    if args.out:
        harness.write_artifacts(args.out, {"aggregate.csv": csv_text, "summary.json": harness.dumps(summary)})
    else:
        sys.stdout.write(csv_text)
    return EXIT_ROWS if summary["failed"] else EXIT_OK


def cmd_up_check(args) -> int:
    if args.trials < 0 or args.max_n < 1 or args.max_n > 20 or args.max_sparsity < 1:
        raise InputError("need trials >= 0, 1 <= max-n <= 20, max-sparsity >= 1")
    report = harness.up_check(args.trials, args.max_n, args.max_sparsity, args.seed)
    _emit(harness.dumps(report), args.out)
    return EXIT_INVARIANT if report["violations"] else EXIT_OK


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--table", help="file holding a hex truth table (2^n bits, point 0 first)")
    p.add_argument("--anf", help="ANF expression or file, e.g. 'x1*x2 + x3 + 1'")
    p.add_argument("--family", help='family spec JSON, e.g. \'{"family": "address", "k": 2}\'')
    p.add_argument("--n", type=int, help="number of variables when it cannot be inferred")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-pdt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="spectrum, sparsity, dimension, norms, optimal NADT")
    _add_input(p)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("procedure", help="run the level-by-level parity query procedure")
    _add_input(p)
    p.add_argument("--tau", default="s23", help="integer, 's23', '2sqrt' or 'sqrt2s'")
    p.add_argument("--finder", choices=("greedy", "exact"), default="greedy")
    p.add_argument("--selector", default="exhaustive", help="'exhaustive' or 'sampled:N'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for trace.csv, trace.json, certificate.json, manifest.json")
    p.set_defaults(func=cmd_procedure)

    p = sub.add_parser("sweep", help="analyze + procedure over families x taus")
    p.add_argument("--families", required=True, help="JSON list of family specs, or a file with one")
    p.add_argument("--taus", default="s23,2sqrt")
    p.add_argument("--finder", choices=("greedy", "exact"), default="greedy")
    p.add_argument("--out", help="directory for aggregate.csv, summary.json, manifest.json")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("up-check", help="random check of Pr[p != 0] >= 1/s")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--max-sparsity", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_up_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
