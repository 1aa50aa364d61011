"""Running a manifest end to end and rendering the results.

``run_assessment`` dispatches every test to its module, collects per-test
records (a failed test is recorded as invalid with a reason instead of
aborting the run), aggregates the surviving indices and packages everything
with provenance into an :class:`AssessmentReport`.

JSON is the canonical machine format and round-trips losslessly; reports
are rendered deterministically, with the timestamp either pinned by the
caller or excluded from comparison concerns.  Markdown mirrors the
name/error/threshold/index table layout; plot-data CSVs carry the aligned
curves and Bode curves for external plotting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np

from . import __version__
from ._csvio import fmt_number, write_rows
from .aggregate import AssessmentSet, Verdict, assess
from .core import CredibilityConfig
from .errors import (
    AlignmentError,
    DegenerateDataError,
    DomainError,
    EstimationError,
    ManifestError,
)
from .manifest import (
    FrequencyTest,
    PerformanceTest,
    RunManifest,
    TimeTest,
    default_segment_len,
)
from .performance import performance_error, performance_index, performance_threshold
from .spectral import (
    FrequencyResponse,
    bode_errors,
    bode_thresholds,
    check_coherence_criterion,
    estimate_frf,
    frequency_index,
    POINTS_PER_DECADE,
)
from .timedomain import (
    align,
    smooth,
    time_domain_error,
    time_domain_index,
    time_domain_threshold,
)

TOOL_NAME = "simcred"

#: Conventions echoed into every report for auditability.
CONVENTIONS = MappingProxyType({"stddev": "population"})

ASSESSED = "assessed"
INVALID = "invalid"


@dataclass(frozen=True)
class TestRecord:
    """Outcome of one test (or of one performance sample)."""

    __test__ = False  # keep pytest from collecting this as a test class

    name: str
    kind: str
    status: str
    unit: str = ""
    error: float | None = None
    threshold: float | None = None
    index: float | None = None
    detail: Mapping[str, Any] = field(default_factory=dict)
    invalid_reason: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "detail", dict(self.detail))

    def __eq__(self, other) -> bool:  # dict detail keeps dataclass eq usable
        if not isinstance(other, TestRecord):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "status": self.status,
            "unit": self.unit,
            "error": self.error,
            "threshold": self.threshold,
            "index": self.index,
            "detail": dict(self.detail),
            "invalid_reason": self.invalid_reason,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TestRecord":
        return cls(**doc)


@dataclass(frozen=True)
class AssessmentReport:
    """Everything one assessment run produced.

    ``curves`` holds plotting payloads (aligned curves, Bode curves) that
    exist only on freshly computed reports; it is excluded from equality
    and from serialization.
    """

    generated_at: str
    config: CredibilityConfig
    tests: tuple[TestRecord, ...]
    verdict: Verdict
    provenance: Mapping[str, Any]
    conventions: Mapping[str, str] = CONVENTIONS
    tool: str = TOOL_NAME
    version: str = __version__
    curves: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "tests", tuple(self.tests))
        object.__setattr__(self, "provenance", dict(self.provenance))
        object.__setattr__(self, "conventions", dict(self.conventions))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AssessmentReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def to_dict(self) -> dict:
        config = {
            "eta_pass": self.config.eta_pass,
            "k_e": self.config.k_e,
            "k_p": self.config.k_p,
            "weights": {
                "p": self.config.alpha_p,
                "t": self.config.alpha_t,
                "f": self.config.alpha_f,
            },
            "eps_min": self.config.eps_min,
            "eps_co": self.config.eps_co,
        }
        verdict = {
            "eta_bar_p": self.verdict.eta_bar_p,
            "eta_bar_t": self.verdict.eta_bar_t,
            "eta_bar_f": self.verdict.eta_bar_f,
            "eta_all": self.verdict.eta_all,
            "eta_all_certified": self.verdict.gate_passed,
            "eta_min": self.verdict.eta_min,
            "min_source": self.verdict.min_source,
            "gate_passed": self.verdict.gate_passed,
        }
        return {
            "tool": self.tool,
            "version": self.version,
            "generated_at": self.generated_at,
            "config": config,
            "conventions": dict(self.conventions),
            "tests": [record.to_dict() for record in self.tests],
            "verdict": verdict,
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "AssessmentReport":
        config_doc = doc["config"]
        config = CredibilityConfig(
            eta_pass=config_doc["eta_pass"],
            k_p=config_doc["k_p"],
            alpha_p=config_doc["weights"]["p"],
            alpha_t=config_doc["weights"]["t"],
            alpha_f=config_doc["weights"]["f"],
            eps_min=config_doc["eps_min"],
            eps_co=config_doc["eps_co"],
        )
        verdict_doc = doc["verdict"]
        verdict = Verdict(
            eta_bar_p=verdict_doc["eta_bar_p"],
            eta_bar_t=verdict_doc["eta_bar_t"],
            eta_bar_f=verdict_doc["eta_bar_f"],
            eta_all=verdict_doc["eta_all"],
            eta_min=verdict_doc["eta_min"],
            min_source=verdict_doc["min_source"],
            gate_passed=verdict_doc["gate_passed"],
        )
        return cls(
            generated_at=doc["generated_at"],
            config=config,
            tests=tuple(TestRecord.from_dict(t) for t in doc["tests"]),
            verdict=verdict,
            provenance=doc["provenance"],
            conventions=doc["conventions"],
            tool=doc["tool"],
            version=doc["version"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AssessmentReport":
        return cls.from_dict(json.loads(text))


def _assess_performance(test: PerformanceTest, config: CredibilityConfig) -> list[TestRecord]:
    records = []
    for sample in test.samples:
        base = dict(
            name=sample.name,
            kind="performance",
            unit=sample.unit,
            detail={
                "test": test.name,
                "p_exp": sample.p_exp,
                "p_sim": sample.p_sim,
            },
        )
        try:
            error = performance_error(sample)
            threshold = performance_threshold(sample, config)
            index = performance_index(sample, config)
        except DegenerateDataError as exc:
            records.append(TestRecord(status=INVALID, invalid_reason=str(exc), **base))
            continue
        records.append(
            TestRecord(status=ASSESSED, error=error, threshold=threshold, index=index, **base)
        )
    return records


def _assess_time(
    test: TimeTest, config: CredibilityConfig, curves: dict
) -> TestRecord:
    if test.k_p is not None:
        config = replace(config, k_p=test.k_p)
    base = dict(name=test.name, kind="time", unit=test.experiment.y_unit)
    try:
        experiment, simulation = test.experiment, test.simulation
        if test.smooth_window is not None:
            experiment = smooth(experiment, test.smooth_window)
            simulation = smooth(simulation, test.smooth_window)
        pair = align(experiment, simulation, test.n_t)
        error = time_domain_error(pair)
        threshold = time_domain_threshold(pair, config)
        index = time_domain_index(pair, config)
    except (AlignmentError, DegenerateDataError, DomainError) as exc:
        return TestRecord(status=INVALID, invalid_reason=str(exc), detail={}, **base)
    curves[test.name] = {
        "kind": "time",
        "grid": pair.grid,
        "y_exp": pair.y_exp,
        "y_sim": pair.y_sim,
    }
    return TestRecord(
        status=ASSESSED,
        error=error,
        threshold=threshold,
        index=index,
        detail={"n_t": len(pair), "smooth_window": test.smooth_window},
        **base,
    )


def _frequency_responses(
    test: FrequencyTest,
) -> tuple[FrequencyResponse, FrequencyResponse, dict]:
    if test.data == "bode":
        return test.exp_bode, test.sim_bode, {}
    segment_len = test.segment_len
    if segment_len is None:
        segment_len = default_segment_len(len(test.exp_sweep))
    overlap = test.overlap if test.overlap is not None else 0.5
    fr_exp = estimate_frf(test.exp_sweep, segment_len, overlap)
    fr_sim = estimate_frf(test.sim_sweep, segment_len, overlap)
    return fr_exp, fr_sim, {"segment_len": segment_len, "overlap": overlap}


def _assess_frequency(
    test: FrequencyTest,
    config: CredibilityConfig,
    curves: dict,
    use_weighting_override: bool | None,
) -> TestRecord:
    if test.k_p is not None:
        config = replace(config, k_p=test.k_p)
    use_weighting = test.use_weighting if use_weighting_override is None else use_weighting_override
    base = dict(name=test.name, kind="frequency", unit="")
    try:
        fr_exp, fr_sim, estimation = _frequency_responses(test)
        if test.band is not None:
            band = test.band
        else:
            band = (
                max(fr_exp.band[0], fr_sim.band[0]),
                min(fr_exp.band[1], fr_sim.band[1]),
            )
        detail: dict[str, Any] = {
            "band": [band[0], band[1]],
            "use_weighting": use_weighting,
            **estimation,
        }
        checks = {
            "experiment": check_coherence_criterion(fr_exp, band[0], band[1], config),
            "simulation": check_coherence_criterion(fr_sim, band[0], band[1], config),
        }
        detail["coherence"] = {
            side: {
                "passed": chk.passed,
                "checked": chk.checked,
                "min": float(np.min(fr.coherence[(fr.freqs >= band[0]) & (fr.freqs <= band[1])])),
                "violations": [float(v) for v in chk.violations[:20]],
            }
            for (side, chk), fr in zip(checks.items(), (fr_exp, fr_sim))
        }
        failed = [side for side, chk in checks.items() if not chk.passed]
        if failed:
            return TestRecord(
                status=INVALID,
                invalid_reason=(
                    f"coherence below {config.eps_co:g} inside the band "
                    f"[{band[0]:g}, {band[1]:g}] rad/s on: {', '.join(failed)}"
                ),
                detail=detail,
                **base,
            )
        ppd = test.points_per_decade if test.points_per_decade is not None else POINTS_PER_DECADE
        e_mag, e_pha = bode_errors(fr_exp, fr_sim, band, use_weighting, ppd)
        eps_mag, eps_pha = bode_thresholds(fr_exp, band, config, ppd)
        eta_mag, eta_pha, eta_f = frequency_index(e_mag, eps_mag, e_pha, eps_pha, config)
        detail.update(
            e_mag=e_mag, eps_mag=eps_mag, eta_mag=eta_mag,
            e_pha=e_pha, eps_pha=eps_pha, eta_pha=eta_pha,
        )
    except (DegenerateDataError, DomainError, EstimationError) as exc:
        return TestRecord(status=INVALID, invalid_reason=str(exc), detail={}, **base)
    curves[test.name] = {
        "kind": "frequency",
        "fr_exp": fr_exp,
        "fr_sim": fr_sim,
    }
    return TestRecord(status=ASSESSED, index=eta_f, detail=detail, **base)


def run_assessment(
    manifest: RunManifest,
    *,
    timestamp: str | None = None,
    use_weighting_override: bool | None = None,
) -> AssessmentReport:
    """Assess every test in the manifest and aggregate the outcome.

    Individual test failures (degenerate curves, coherence violations, ...)
    become invalid records and are excluded from aggregation; the run only
    aborts when no valid test remains.  Deterministic for fixed inputs when
    ``timestamp`` is pinned.
    """
    config = manifest.config
    records: list[TestRecord] = []
    curves: dict[str, Any] = {}
    for test in manifest.tests:
        if isinstance(test, PerformanceTest):
            records.extend(_assess_performance(test, config))
        elif isinstance(test, TimeTest):
            records.append(_assess_time(test, config, curves))
        elif isinstance(test, FrequencyTest):
            records.append(_assess_frequency(test, config, curves, use_weighting_override))
        else:  # pragma: no cover - descriptors are closed
            raise ManifestError(f"unknown test descriptor {type(test).__name__}")

    by_kind = {"performance": [], "time": [], "frequency": []}
    for record in records:
        if record.status == ASSESSED:
            by_kind[record.kind].append((record.name, record.index))
    if not any(by_kind.values()):
        raise DegenerateDataError("no valid test to aggregate; every test was invalid")
    verdict = assess(
        AssessmentSet(
            perf_indices=tuple(by_kind["performance"]),
            time_indices=tuple(by_kind["time"]),
            freq_indices=tuple(by_kind["frequency"]),
        ),
        config,
    )
    generated_at = timestamp if timestamp is not None else _utc_now()
    provenance = {
        "manifest": str(manifest.path),
        "inputs_sha256": dict(sorted(manifest.digests.items())),
    }
    return AssessmentReport(
        generated_at=generated_at,
        config=config,
        tests=tuple(records),
        verdict=verdict,
        provenance=provenance,
        curves=curves,
    )


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


FORMATS = ("json", "markdown", "plotdata")


def emit_report(report: AssessmentReport, format: str, out_dir: str | Path) -> list[Path]:
    """Write the report in one format; returns the paths written.

    ``json`` is canonical and lossless; ``markdown`` renders the summary
    tables; ``plotdata`` writes per-test CSVs of the curves and requires a
    freshly computed report (curve payloads do not survive JSON).
    """
    if format == "md":
        format = "markdown"
    if format not in FORMATS:
        raise DomainError(f"unknown report format {format!r}; choose from {FORMATS}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DomainError(f"cannot create output directory {out}: {exc}") from exc
    if format == "json":
        path = out / "report.json"
        path.write_text(report.to_json())
        return [path]
    if format == "markdown":
        path = out / "report.md"
        path.write_text(render_markdown(report))
        return [path]
    return _emit_plotdata(report, out)


def _fmt(value: float | None, digits: int = 6) -> str:
    if value is None:
        return "-"
    return f"{value:.{digits}g}"


def _pct(value: float | None) -> str:
    return "-" if value is None else f"{100.0 * value:.2f}%"


_KIND_TITLES = (
    ("performance", "Performance tests"),
    ("time", "Time-domain tests"),
    ("frequency", "Frequency-domain tests"),
)


def render_markdown(report: AssessmentReport) -> str:
    """Render the per-category tables (error / threshold / index) and the
    verdict."""
    lines = [
        "# Simulation credibility report",
        "",
        f"- tool: {report.tool} {report.version}",
        f"- generated: {report.generated_at}",
        f"- passing mark eta_pass = {report.config.eta_pass:g}, "
        f"k_p = {report.config.k_p:g}, eps_min = {report.config.eps_min:g}, "
        f"eps_co = {report.config.eps_co:g}",
        f"- weights (p, t, f) = ({report.config.alpha_p:g}, "
        f"{report.config.alpha_t:g}, {report.config.alpha_f:g})",
        f"- stddev convention: {report.conventions.get('stddev', 'population')}",
        "",
    ]
    for kind, title in _KIND_TITLES:
        rows = [r for r in report.tests if r.kind == kind and r.status == ASSESSED]
        if not rows:
            continue
        lines += [f"## {title}", "", "| Test | Error e | Threshold eps | Index eta |", "|---|---|---|---|"]
        for r in rows:
            if kind == "frequency":
                lines.append(
                    f"| {r.name} (magnitude) | {_fmt(r.detail.get('e_mag'))} dB "
                    f"| {_fmt(r.detail.get('eps_mag'))} dB | {_pct(r.detail.get('eta_mag'))} |"
                )
                lines.append(
                    f"| {r.name} (phase) | {_fmt(r.detail.get('e_pha'))} deg "
                    f"| {_fmt(r.detail.get('eps_pha'))} deg | {_pct(r.detail.get('eta_pha'))} |"
                )
                lines.append(f"| {r.name} (combined) | - | - | {_pct(r.index)} |")
            else:
                unit = f" {r.unit}" if r.unit else ""
                lines.append(
                    f"| {r.name} | {_fmt(r.error)}{unit} | {_fmt(r.threshold)}{unit} | {_pct(r.index)} |"
                )
        lines.append("")
    invalid = [r for r in report.tests if r.status == INVALID]
    if invalid:
        lines += ["## Invalid tests", ""]
        for r in invalid:
            lines.append(f"- **{r.name}** ({r.kind}): {r.invalid_reason}")
        lines.append("")
    v = report.verdict
    lines += [
        "## Verdict",
        "",
        f"- category averages: performance {_pct(v.eta_bar_p)}, "
        f"time {_pct(v.eta_bar_t)}, frequency {_pct(v.eta_bar_f)}",
        f"- overall index eta_all = {_pct(v.eta_all)}"
        + ("" if v.gate_passed else " (NOT certified: worst-case gate failed)"),
        f"- minimum index eta_min = {_pct(v.eta_min)} (from {v.min_source})",
        f"- worst-case gate (eta_min >= {report.config.eps_min:g}): "
        + ("PASSED" if v.gate_passed else "FAILED"),
        "",
    ]
    return "\n".join(lines)


def _emit_plotdata(report: AssessmentReport, out: Path) -> list[Path]:
    if not report.curves:
        raise DomainError(
            "no curve payloads on this report; plotdata is only available on a "
            "freshly computed report (not one re-loaded from JSON)"
        )
    written: list[Path] = []
    for name, payload in report.curves.items():
        safe = name.replace("/", "_").replace(" ", "_")
        if payload["kind"] == "time":
            path = out / f"{safe}_curves.csv"
            write_rows(
                path,
                ["t", "y_exp", "y_sim", "error"],
                zip(
                    (fmt_number(v) for v in payload["grid"]),
                    (fmt_number(v) for v in payload["y_exp"]),
                    (fmt_number(v) for v in payload["y_sim"]),
                    (fmt_number(v) for v in payload["y_exp"] - payload["y_sim"]),
                ),
            )
            written.append(path)
        elif payload["kind"] == "frequency":
            fr_exp: FrequencyResponse = payload["fr_exp"]
            fr_sim: FrequencyResponse = payload["fr_sim"]
            lo = max(fr_exp.band[0], fr_sim.band[0])
            hi = min(fr_exp.band[1], fr_sim.band[1])
            keep = (fr_exp.freqs >= lo) & (fr_exp.freqs <= hi)
            grid = fr_exp.freqs[keep]
            logf = np.log(grid)
            mag_s = np.interp(logf, np.log(fr_sim.freqs), fr_sim.magnitude)
            pha_s = np.interp(logf, np.log(fr_sim.freqs), fr_sim.phase)
            path = out / f"{safe}_bode.csv"
            write_rows(
                path,
                ["f", "mag_e", "mag_s", "phase_e", "phase_s", "coherence"],
                zip(
                    (fmt_number(v) for v in grid),
                    (fmt_number(v) for v in fr_exp.magnitude[keep]),
                    (fmt_number(v) for v in mag_s),
                    (fmt_number(v) for v in fr_exp.phase[keep]),
                    (fmt_number(v) for v in pha_s),
                    (fmt_number(v) for v in fr_exp.coherence[keep]),
                ),
            )
            written.append(path)
    if not written:
        raise DomainError("report holds no plottable tests (performance-only run)")
    return written
