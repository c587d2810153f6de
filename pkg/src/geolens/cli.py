"""Command-line front end.

Subcommands: profile, verify, radii, counterexample, speculate.
Exit codes: 0 success, 1 claim failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys

from geolens import _kernels
from geolens.config import RunConfig, atomic_write, load_config
from geolens.errors import ConfigError, GeolensError
from geolens.lens import BallPair, w_profile
from geolens.manifolds import SurfaceOfRevolution
from geolens.radii import radii_report
from geolens.suite import run_counterexample, run_speculation_probe, run_verification_suite

EXIT_OK = 0
EXIT_CLAIM_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="geolens",
        description="Geodesic-ball overlap widths and supporting geometry on model manifolds.",
    )
    parser.add_argument("--backend", action="store_true", help="print the kernel backend and exit")
    sub = parser.add_subparsers(dest="command")
    for name, doc in [
        ("profile", "sample the overlap width profile and write it as CSV"),
        ("verify", "run the verification suite (exit 1 on claim failure)"),
        ("radii", "print the radii report of the configured manifold"),
        ("counterexample", "run the large-ball sphere scenario"),
        ("speculate", "run the report-only regularity probes"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="path to the INI run configuration")
        p.add_argument("--seed", type=int, default=None, help="override [run] seed")
        p.add_argument("--grid", type=int, default=None, help="override [run] grid")
        p.add_argument("--budget", type=int, default=None, help="override [run] budget")
        p.add_argument("--out", default=None, help="override [run] out path")
        p.add_argument(
            "--expect-counterexample",
            action="store_true",
            help="admit radii at or beyond the convexity radius",
        )
    return parser


def _resolve(args) -> RunConfig:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.grid is not None:
        overrides["grid"] = args.grid
    if args.budget is not None:
        overrides["budget"] = args.budget
    if args.out is not None:
        overrides["out"] = args.out
    if args.expect_counterexample or args.command == "counterexample":
        overrides["expect_counterexample"] = True
    return load_config(args.config, overrides)


def _cmd_profile(config: RunConfig) -> int:
    from geolens.config import convexity_bound_for

    manifold = config.manifold.build()
    if config.expect_counterexample:
        conv, enforce = math.inf, False
    else:
        conv, enforce = convexity_bound_for(config, manifold), True
    bp = BallPair.create(
        manifold,
        config.R,
        config.r,
        convexity_bound=conv,
        enforce_convexity=enforce,
    )
    profile = w_profile(bp, grid=config.grid, budget=config.budget, seed=config.seed)
    out = config.out or "profile.csv"
    profile.to_csv(out, config_lines=config.resolved_lines())
    print(f"wrote {out} ({config.grid} rows)")
    print(profile.summary())
    return EXIT_OK


def _cmd_verify(config: RunConfig) -> int:
    if config.expect_counterexample:
        report = run_counterexample(config)
    else:
        report = run_verification_suite(config)
    print(report.to_text())
    if config.out:
        _write_records(config.out, report)
        print(f"wrote {config.out}")
    return EXIT_OK if report.passed else EXIT_CLAIM_FAILURE


def _cmd_radii(config: RunConfig) -> int:
    manifold = config.manifold.build()
    report = radii_report(
        manifold,
        certified_injectivity=config.manifold.injectivity_bound,
        certified_loop_length=config.manifold.loop_length,
    )
    width = max(len(name) for name, _ in report.fields())
    print(f"radii report for {report.manifold_label}")
    for name, value in report.fields():
        print(f"  {name:<{width}}  {value.render():>14}  [{value.provenance}]")
    residuals = report.identity_residuals()
    for name, res in residuals.items():
        shown = "skipped" if math.isnan(res) else f"{res:.3e}"
        print(f"  identity {name:<18} residual {shown}")
    if config.out:
        lines = ["field,value,lower_bound_only,provenance"]
        for name, value in report.fields():
            lines.append(
                f"{name},{value.value!r},{int(value.lower_bound_only)},{value.provenance}"
            )
        atomic_write(config.out, "\n".join(lines) + "\n")
        print(f"wrote {config.out}")
    return EXIT_OK


def _cmd_counterexample(config: RunConfig) -> int:
    report = run_counterexample(config)
    print(report.to_text())
    return EXIT_OK if report.passed else EXIT_CLAIM_FAILURE


def _cmd_speculate(config: RunConfig) -> int:
    report = run_speculation_probe(config)
    print(report.to_text())
    return EXIT_OK


def _write_records(path, report) -> None:
    lines = ["claim,status,margin,summary"]
    for rec in report.to_records():
        summary = rec["summary"].replace('"', "'")
        lines.append(f'{rec["claim"]},{rec["status"]},{rec["margin"]},"{summary}"')
    atomic_write(path, "\n".join(lines) + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        print(_kernels.BACKEND)
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG_ERROR
    try:
        config = _resolve(args)
        handler = {
            "profile": _cmd_profile,
            "verify": _cmd_verify,
            "radii": _cmd_radii,
            "counterexample": _cmd_counterexample,
            "speculate": _cmd_speculate,
        }[args.command]
        return handler(config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except GeolensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLAIM_FAILURE


if __name__ == "__main__":
    sys.exit(main())
