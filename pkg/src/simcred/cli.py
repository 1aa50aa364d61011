"""Command-line interface.

Verbs:
  assess    run every test in a manifest and write a report
  perf      assess one CSV of performance samples
  time      assess one experiment/simulation curve pair
  freq      assess one experiment/simulation sweep (or Bode CSV) pair
  gen       emit a synthetic demo dataset plus a ready-to-run manifest
  report    re-render a stored JSON report

Exit codes: 0 passed, 1 failed (worst-case gate for assess/report, passing
mark for the single-test verbs), 2 invalid input, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from pathlib import Path

from . import __version__
from .core import CredibilityConfig, load_config
from .errors import SimcredError
from .manifest import load_manifest
from .performance import performance_error, performance_index, performance_threshold, read_samples_csv
from .report import ASSESSED, AssessmentReport, emit_report, render_markdown, run_assessment
from .spectral import (
    POINTS_PER_DECADE,
    bode_errors,
    bode_thresholds,
    check_coherence_criterion,
    estimate_frf,
    frequency_index,
    read_bode_csv,
    read_sweep_csv,
)
from .synthgen import write_demo_dataset
from .timedomain import align, read_series_csv, smooth, time_domain_error, time_domain_index, time_domain_threshold

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3

CONFIG_ENV = "SIMCRED_CONFIG"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simcred",
        description="Quantitative credibility assessment of simulations against experiments.",
    )
    parser.add_argument("--version", action="version", version=f"simcred {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument(
            "--config",
            metavar="PATH",
            help=f"JSON config file (falls back to ${CONFIG_ENV})",
        )

    p_assess = sub.add_parser("assess", help="run every test in a manifest")
    p_assess.add_argument("manifest", metavar="MANIFEST", help="manifest JSON path")
    add_config(p_assess)
    p_assess.add_argument("--out", metavar="DIR", default=".", help="output directory")
    p_assess.add_argument(
        "--format", choices=("json", "md", "plotdata"), default="json", help="report format"
    )
    p_assess.add_argument(
        "--no-weighting",
        action="store_true",
        help="disable coherence weighting in every frequency test",
    )
    p_assess.add_argument(
        "--pin-timestamp",
        metavar="ISO8601",
        help="use this timestamp instead of the current time (for reproducible reports)",
    )

    p_perf = sub.add_parser("perf", help="assess one CSV of performance samples")
    p_perf.add_argument("--file", required=True, metavar="CSV", help="samples CSV")
    add_config(p_perf)

    p_time = sub.add_parser("time", help="assess one pair of curves")
    p_time.add_argument("--exp", required=True, metavar="CSV", help="experiment curve (t,y)")
    p_time.add_argument("--sim", required=True, metavar="CSV", help="simulation curve (t,y)")
    p_time.add_argument("--n-t", type=int, metavar="N", help="number of grid points")
    p_time.add_argument("--smooth", type=int, metavar="W", help="odd moving-average window")
    add_config(p_time)

    p_freq = sub.add_parser("freq", help="assess one pair of sweep records or Bode CSVs")
    p_freq.add_argument("--exp", required=True, metavar="CSV", help="experiment data")
    p_freq.add_argument("--sim", required=True, metavar="CSV", help="simulation data")
    p_freq.add_argument(
        "--data", choices=("sweep", "bode"), default="sweep", help="input data layout"
    )
    p_freq.add_argument(
        "--band", type=float, nargs=2, metavar=("FA", "FB"), help="assessment band, rad/s"
    )
    p_freq.add_argument("--segment-len", type=int, metavar="N", help="estimator segment length")
    p_freq.add_argument(
        "--overlap", type=float, default=0.5, metavar="R", help="segment overlap fraction"
    )
    p_freq.add_argument(
        "--points-per-decade", type=int, default=POINTS_PER_DECADE, metavar="N",
        help="comparison grid density",
    )
    p_freq.add_argument("--no-weighting", action="store_true", help="disable coherence weighting")
    add_config(p_freq)

    p_gen = sub.add_parser("gen", help="generate a demo dataset and manifest")
    p_gen.add_argument("--out", metavar="DIR", default="demo_data", help="output directory")
    p_gen.add_argument("--seed", type=int, default=0, help="generator seed")

    p_report = sub.add_parser("report", help="re-render a stored JSON report")
    p_report.add_argument("report", metavar="REPORT_JSON", help="report.json path")
    p_report.add_argument("--out", metavar="DIR", default=".", help="output directory")
    p_report.add_argument("--format", choices=("json", "md"), default="md", help="output format")

    return parser


def _effective_config(args) -> CredibilityConfig:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        return load_config(path)
    return CredibilityConfig()


def _pass_fail(index: float, config: CredibilityConfig) -> int:
    return EXIT_PASS if index >= config.eta_pass else EXIT_FAIL


def _cmd_assess(args) -> int:
    config = _effective_config(args)
    manifest = load_manifest(args.manifest, base_config=config)
    report = run_assessment(
        manifest,
        timestamp=args.pin_timestamp,
        use_weighting_override=False if args.no_weighting else None,
    )
    paths = emit_report(report, args.format, args.out)
    for path in paths:
        print(f"wrote {path}")
    v = report.verdict
    invalid = [r for r in report.tests if r.status != ASSESSED]
    print(
        f"eta_all = {100 * v.eta_all:.2f}%"
        + ("" if v.gate_passed else " (not certified)")
        + f", eta_min = {100 * v.eta_min:.2f}% ({v.min_source}), "
        + f"gate {'PASSED' if v.gate_passed else 'FAILED'}"
    )
    for record in invalid:
        print(f"invalid: {record.name} ({record.kind}): {record.invalid_reason}")
    return EXIT_PASS if v.gate_passed else EXIT_FAIL


def _cmd_perf(args) -> int:
    config = _effective_config(args)
    samples = read_samples_csv(args.file)
    worst = 1.0
    for sample in samples:
        error = performance_error(sample)
        threshold = performance_threshold(sample, config)
        index = performance_index(sample, config)
        worst = min(worst, index)
        print(f"{sample.name}: e = {error:.6g}, eps = {threshold:.6g}, eta = {100 * index:.2f}%")
    return _pass_fail(worst, config)


def _cmd_time(args) -> int:
    config = _effective_config(args)
    exp = read_series_csv(args.exp)
    sim = read_series_csv(args.sim)
    if args.smooth is not None:
        exp = smooth(exp, args.smooth)
        sim = smooth(sim, args.smooth)
    pair = align(exp, sim, args.n_t)
    error = time_domain_error(pair)
    threshold = time_domain_threshold(pair, config)
    index = time_domain_index(pair, config)
    print(f"e_t = {error:.6g}, eps_t = {threshold:.6g}, eta_t = {100 * index:.2f}%")
    return _pass_fail(index, config)


def _cmd_freq(args) -> int:
    config = _effective_config(args)
    if args.data == "sweep":
        rec_exp = read_sweep_csv(args.exp)
        rec_sim = read_sweep_csv(args.sim)
        segment_len = args.segment_len
        if segment_len is None:
            from .manifest import default_segment_len

            segment_len = default_segment_len(len(rec_exp))
        fr_exp = estimate_frf(rec_exp, segment_len, args.overlap)
        fr_sim = estimate_frf(rec_sim, segment_len, args.overlap)
    else:
        fr_exp = read_bode_csv(args.exp)
        fr_sim = read_bode_csv(args.sim)
    if args.band is not None:
        band = (args.band[0], args.band[1])
    else:
        band = (max(fr_exp.band[0], fr_sim.band[0]), min(fr_exp.band[1], fr_sim.band[1]))
    for side, fr in (("experiment", fr_exp), ("simulation", fr_sim)):
        check = check_coherence_criterion(fr, band[0], band[1], config)
        if not check.passed:
            print(
                f"coherence criterion FAILED on {side}: {len(check.violations)} of "
                f"{check.checked} grid points below {config.eps_co:g} in "
                f"[{band[0]:g}, {band[1]:g}] rad/s"
            )
            return EXIT_FAIL
    use_weighting = not args.no_weighting
    e_mag, e_pha = bode_errors(fr_exp, fr_sim, band, use_weighting, args.points_per_decade)
    eps_mag, eps_pha = bode_thresholds(fr_exp, band, config, args.points_per_decade)
    eta_mag, eta_pha, eta_f = frequency_index(e_mag, eps_mag, e_pha, eps_pha, config)
    print(f"magnitude: e = {e_mag:.4g} dB, eps = {eps_mag:.4g} dB, eta = {100 * eta_mag:.2f}%")
    print(f"phase:     e = {e_pha:.4g} deg, eps = {eps_pha:.4g} deg, eta = {100 * eta_pha:.2f}%")
    print(f"combined:  eta_f = {100 * eta_f:.2f}%")
    return _pass_fail(eta_f, config)


def _cmd_gen(args) -> int:
    manifest_path = write_demo_dataset(args.out, seed=args.seed)
    print(f"wrote {manifest_path}")
    print(f"run: simcred assess {manifest_path}")
    return EXIT_PASS


def _cmd_report(args) -> int:
    path = Path(args.report)
    try:
        report = AssessmentReport.from_json(path.read_text())
    except OSError as exc:
        raise SimcredError(f"cannot read report {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise SimcredError(f"{path} is not a valid report: {exc}") from exc
    paths = emit_report(report, args.format, args.out)
    for written in paths:
        print(f"wrote {written}")
    if args.format == "md":
        print(render_markdown(report))
    return EXIT_PASS if report.verdict.gate_passed else EXIT_FAIL


_COMMANDS = {
    "assess": _cmd_assess,
    "perf": _cmd_perf,
    "time": _cmd_time,
    "freq": _cmd_freq,
    "gen": _cmd_gen,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SimcredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
