"""Command-line front end: ``sieve run`` and ``sieve verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    ConfigError,
    ExperimentConfig,
    VERIFY_SUITES,
    records_to_csv_text,
    records_to_json_text,
    run_sieve_grid,
    run_verify_suite,
    slope_report,
)

_FAMILY_ALIASES = {"all": "all", "natural": "natural", "square-norm": "square-norm"}


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sieve",
        description="Large-sieve experiments over the Gaussian integers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a (family, Q, N, coeff) grid")
    run.add_argument("--config", help="JSON config file; flags override its fields")
    run.add_argument("--Q", help="comma list of Q values, e.g. 2,4,8")
    run.add_argument("--N", help="comma list of N values, e.g. 16,256")
    run.add_argument("--family", help="comma list: all,natural,square-norm")
    run.add_argument("--coeff", help="comma list: delta,all-ones,random,adversary")
    run.add_argument("--epsilon", type=float)
    run.add_argument("--seed", type=int)
    run.add_argument("--mode", choices=("windowed", "cumulative"))
    run.add_argument("--threads", type=int)
    run.add_argument("--format", choices=("csv", "json"), dest="fmt")
    run.add_argument("--engine", choices=("fast", "naive"))
    run.add_argument(
        "--timing",
        choices=("none", "wall"),
        help="'wall' writes measured times and breaks byte-for-byte determinism",
    )
    run.add_argument("--slope-report", help="also write the fitted ratio slopes to this JSON path")
    run.add_argument("--out", required=True)

    verify = sub.add_parser("verify", help="run one verification suite")
    verify.add_argument("suite", choices=sorted(VERIFY_SUITES))
    verify.add_argument("--max-norm", type=int)
    verify.add_argument("--out", help="write the JSON report here instead of stdout")
    return parser


def _load_config(args) -> ExperimentConfig:
    data = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    cfg = ExperimentConfig.from_dict(data)
    overrides = {}
    if args.Q:
        overrides["q_values"] = tuple(int(x) for x in _split_list(args.Q))
    if args.N:
        overrides["n_values"] = tuple(int(x) for x in _split_list(args.N))
    if args.family:
        fams = []
        for f in _split_list(args.family):
            if f not in _FAMILY_ALIASES:
                raise ConfigError(f"unknown family {f!r}")
            fams.append(_FAMILY_ALIASES[f])
        overrides["families"] = tuple(fams)
    if args.coeff:
        overrides["coeff_specs"] = tuple(_split_list(args.coeff))
    for name in ("epsilon", "seed", "mode", "threads", "fmt", "engine", "timing"):
        val = getattr(args, name)
        if val is not None:
            overrides[name] = val
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def _cmd_run(args) -> int:
    try:
        cfg = _load_config(args)
        records = run_sieve_grid(cfg)
        text = (
            records_to_csv_text(records, cfg.timing)
            if cfg.fmt == "csv"
            else records_to_json_text(records, cfg.timing)
        )
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if args.slope_report:
            with open(args.slope_report, "w", encoding="utf-8") as fh:
                json.dump(slope_report(records), fh, sort_keys=True, indent=2)
                fh.write("\n")
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    try:
        report = run_verify_suite(args.suite, args.max_norm)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    n_fail = sum(not c["passed"] for c in report["checks"])
    print(
        f"suite {args.suite}: {'PASS' if report['passed'] else f'FAIL ({n_fail} checks)'}",
        file=sys.stderr,
    )
    return 0 if report["passed"] else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify":
        return _cmd_verify(args)
    parser.error("no command")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
