"""Command-line entry point: ``vissig extract | verify | bench``.

Exit codes: 0 success, 1 a verification or benchmark check failed,
2 bad input or configuration.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

from . import bench, pipeline, theorems
from .transforms import ConfigError, output_dim, parse_chain

log = logging.getLogger("vissig")

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


@contextlib.contextmanager
def _open(path: str, mode: str):
    if path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="utf-8", newline="") as fh:
            yield fh


def cmd_extract(args) -> int:
    try:
        config = pipeline.RunConfig(
            depth=args.level,
            chain=parse_chain(args.transforms),
            kind=args.feature,
            include_constant=args.include_constant,
            seed=args.seed,
            workers=args.workers,
        )
        with _open(args.input, "r") as fh:
            streams = pipeline.read_streams(fh)
        records = pipeline.extract(streams, config)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT

    alphabet = output_dim(streams[0][2].shape[1], config.chain) if streams else None
    with _open(args.output, "w") as fh:
        pipeline.write_features(
            records, fh, alphabet=alphabet, depth=config.depth,
            include_constant=config.include_constant,
        )
    if args.metadata:
        meta = config.to_dict() | {
            "alphabet": alphabet,
            "columns": pipeline.feature_names(alphabet, config.depth, config.include_constant)
            if alphabet else [],
        }
        with open(args.metadata, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    log.info("wrote %d records", len(records))
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = theorems.run_suite(trials=args.trials, seed=args.seed)
    for r in reports:
        if args.json:
            print(json.dumps(r.to_dict(), sort_keys=True))
        else:
            status = "PASS" if r.passed else "FAIL"
            extra = "  " + " ".join(f"{k}={v:.3g}" for k, v in r.details.items()) if r.details else ""
            print(f"{status}  {r.name:<18} max_abs_error={r.max_abs_error:.3e}  tol={r.tolerance:g}{extra}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_bench(args) -> int:
    report = bench.run_benchmark(seed=args.seed, per_class=args.per_class, timing=args.timing)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.figures:
        from .plotting import render_benchmark_figures

        data = bench.synth_dataset(args.seed, args.per_class)
        for p in render_benchmark_figures(data, report, args.figures):
            log.info("figure %s", p)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vissig", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="signature features for JSONL streams")
    p.add_argument("--input", default="-", help="JSONL file, or - for stdin")
    p.add_argument("--output", default="-", help="CSV file, or - for stdout")
    p.add_argument("--level", type=int, required=True, help="truncation depth")
    p.add_argument("--transforms", default="", help="e.g. time,leadlag,vis_i or scale:0.5")
    p.add_argument("--feature", choices=["sig", "logsig"], default="sig")
    p.add_argument("--include-constant", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--metadata", help="also write run configuration and column names as JSON")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="numerical checks of the signature identities")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="one JSON object per check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="synthetic position-sensitivity benchmark")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--per-class", type=int, default=60)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--figures", metavar="DIR", help="render PNG figures into DIR")
    p.add_argument("--timing", action="store_true", help="fill in elapsed_ms (breaks byte-reproducibility)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
