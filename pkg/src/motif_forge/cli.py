"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .discovery import discover
from .errors import ConfigError, DataError
from .evaluation import GroundTruth, evaluate
from .io import (load_config, load_time_series, max_n, parse_result, save_time_series, serialize_result,
                 write_spans)
from .synth import SynthSpec, synthesize

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4

log = logging.getLogger("motif_forge")


def _cmd_discover(args) -> int:
    x = load_time_series(args.input)
    cap = max_n()
    if x.n > cap:
        raise DataError(f"series has {x.n} samples, above the limit of {cap} (set MOTIF_FORGE_MAX_N to raise it)")
    rc = load_config(args.config)
    cfg = rc.to_discovery_config(x, base_dir=os.path.dirname(os.path.abspath(args.config)),
                                 threads=args.threads)
    result = discover(x, cfg)
    text = serialize_result(result, {"rho": rc.rho, "nu": rc.nu})
    with open(args.output, "w") as fh:
        fh.write(text)
    if args.spans:
        write_spans(args.spans, result)
    found = sum(m is not None for m in result.motif_sets)
    log.info("found %d of %d motif sets", found, rc.kappa)
    return EXIT_OK


def _cmd_eval(args) -> int:
    try:
        with open(args.result) as fh:
            result = parse_result(fh.read())
    except OSError as exc:
        raise DataError(f"cannot read {args.result}: {exc.strerror or exc}") from exc
    gt = GroundTruth.load(args.gt)
    if not 0.0 < args.threshold <= 1.0:
        raise ConfigError("threshold must lie in (0, 1]", "--threshold")
    report = evaluate(result.motif_sets, gt, args.ignore_unmatched, args.threshold)
    json.dump(report.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_synth(args) -> int:
    try:
        with open(args.spec) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.spec}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    spec = SynthSpec.from_dict(doc)
    try:
        x, gt = synthesize(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    save_time_series(args.output, x)
    gt.save(args.gt)
    return EXIT_OK


def _cmd_selfcheck(args) -> int:
    from .selfcheck import run_all

    ok = True
    for name, passed, detail in run_all():
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    return EXIT_OK if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="motif-forge", description="Constrained motif-set discovery in time series.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("discover", help="discover motif sets in a CSV series")
    d.add_argument("-i", "--input", required=True, help="series CSV (one row per sample)")
    d.add_argument("-c", "--config", required=True, help="configuration JSON")
    d.add_argument("-o", "--output", required=True, help="result JSON")
    d.add_argument("--spans", help="also write a tab-separated spans file")
    d.add_argument("--threads", type=int, default=1, help="threads for the candidate scan")
    d.set_defaults(func=_cmd_discover)

    e = sub.add_parser("eval", help="score a result against ground truth")
    e.add_argument("-r", "--result", required=True)
    e.add_argument("-g", "--gt", required=True)
    e.add_argument("--ignore-unmatched", action="store_true", help="leave unmatched sets out of precision")
    e.add_argument("--threshold", type=float, default=0.5, help="Jaccard threshold for a match")
    e.set_defaults(func=_cmd_eval)

    s = sub.add_parser("synth", help="generate a series with planted patterns")
    s.add_argument("-s", "--spec", required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("-g", "--gt", required=True)
    s.set_defaults(func=_cmd_synth)

    c = sub.add_parser("selfcheck", help="run the built-in invariant checks")
    c.set_defaults(func=_cmd_selfcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if getattr(args, "threads", 1) is not None and getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
