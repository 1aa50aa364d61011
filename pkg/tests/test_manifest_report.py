"""Manifest loading, end-to-end assessment and report emission tests."""

import json

import numpy as np
import pytest

from simcred import (
    AssessmentReport,
    CredibilityConfig,
    DegenerateDataError,
    ManifestError,
    Verdict,
    emit_report,
    load_manifest,
    render_markdown,
    run_assessment,
)
from simcred.manifest import default_segment_len
from simcred.report import ASSESSED, INVALID, TestRecord
from simcred.synthgen import SecondOrderPlant, log_sweep, sweep_response_record
from simcred.spectral import SweepRecord, write_sweep_csv
from simcred.timedomain import TimeSeries, write_series_csv


class TestLoadManifest:
    def test_reference_manifest(self, reference_manifest_path):
        manifest = load_manifest(reference_manifest_path)
        assert [t.name for t in manifest.tests] == ["sensor_noise", "level_flight", "pitch_sweep"]
        assert manifest.config.weights == (0.3, 0.3, 0.4)
        assert "sensors.csv" in manifest.digests
        assert "manifest.json" in manifest.digests

    def test_missing_file_names_path(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [{"kind": "performance", "name": "p", "file": "absent.csv"}]
        }))
        with pytest.raises(ManifestError, match="absent.csv"):
            load_manifest(path)

    def test_duplicate_names(self, tmp_path, reference_manifest_path):
        doc = json.loads(reference_manifest_path.read_text())
        doc["tests"].append(dict(doc["tests"][0]))
        path = reference_manifest_path.parent / "dup.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ManifestError, match="duplicate test name"):
            load_manifest(path)

    def test_unknown_kind(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"tests": [{"kind": "spatial", "name": "x"}]}))
        with pytest.raises(ManifestError, match="unknown kind"):
            load_manifest(path)

    def test_malformed_data_csv(self, tmp_path):
        (tmp_path / "bad.csv").write_text("name,unit,p_exp,p_sim\nx,u,1.0,oops\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [{"kind": "performance", "name": "p", "file": "bad.csv"}]
        }))
        with pytest.raises(ManifestError, match=r"bad\.csv:2"):
            load_manifest(path)

    def test_unknown_test_key(self, tmp_path):
        (tmp_path / "s.csv").write_text("name,unit,p_exp,p_sim\nx,u,1.0,1.0\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [{"kind": "performance", "name": "p", "file": "s.csv", "bogus": 1}]
        }))
        with pytest.raises(ManifestError, match="unknown keys"):
            load_manifest(path)

    def test_base_config_stacks_under_manifest(self, reference_manifest_path):
        base = CredibilityConfig(eps_min=0.95)
        manifest = load_manifest(reference_manifest_path, base_config=base)
        assert manifest.config.eps_min == 0.95  # from base
        assert manifest.config.weights == (0.3, 0.3, 0.4)  # from manifest

    def test_default_segment_len(self):
        assert default_segment_len(60001) == 4096
        assert default_segment_len(1000) == 64
        assert default_segment_len(17) == 2


class TestRunAssessment:
    def test_reference_numbers(self, reference_manifest_path):
        report = run_assessment(load_manifest(reference_manifest_path))
        v = report.verdict
        assert v.eta_bar_p == pytest.approx(0.940, abs=1e-3)
        assert v.eta_bar_t == pytest.approx(0.944, abs=1e-3)
        assert v.eta_bar_f == pytest.approx(0.9746, abs=1e-3)
        assert v.eta_all == pytest.approx(0.9536, abs=3e-3)
        assert v.eta_min == pytest.approx(0.906, abs=1e-3)
        assert v.min_source == "gyro_noise_still"
        assert v.gate_passed

    def test_every_manifest_test_appears_exactly_once(self, reference_manifest_path):
        manifest = load_manifest(reference_manifest_path)
        report = run_assessment(manifest)
        # performance rows are reported per sample, tagged with their test
        perf = [r for r in report.tests if r.kind == "performance"]
        assert {r.detail["test"] for r in perf} == {"sensor_noise"}
        assert [r.name for r in perf] == [
            "accel_noise_still", "accel_noise_vibrating",
            "gyro_noise_still", "gyro_noise_vibrating",
        ]
        others = [r.name for r in report.tests if r.kind != "performance"]
        assert others == ["level_flight", "pitch_sweep"]

    def test_single_performance_test_gets_full_weight(self, tmp_path):
        (tmp_path / "one.csv").write_text("name,unit,p_exp,p_sim\nsolo,u,10.0,9.8\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [{"kind": "performance", "name": "p", "file": "one.csv"}]
        }))
        report = run_assessment(load_manifest(path))
        assert report.verdict.eta_all == pytest.approx(report.tests[0].index, rel=1e-12)

    def test_incoherent_frequency_test_marked_invalid(self, tmp_path):
        plant = SecondOrderPlant(natural_freq=10.0, damping=0.3, gain=2.0)
        sweep = log_sweep(0.25, 40.0, duration=60.0, sample_rate=250.0)
        rec_exp = sweep_response_record(plant, sweep)
        rng = np.random.default_rng(17)
        noise_out = TimeSeries(t=sweep.t, y=rng.normal(0.0, 1.0, len(sweep)))
        rec_sim = SweepRecord.from_series(input=sweep, output=noise_out)
        write_sweep_csv(tmp_path / "exp.csv", rec_exp)
        write_sweep_csv(tmp_path / "sim.csv", rec_sim)
        (tmp_path / "one.csv").write_text("name,unit,p_exp,p_sim\nsolo,u,10.0,9.9\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [
                {"kind": "performance", "name": "p", "file": "one.csv"},
                {
                    "kind": "frequency", "name": "noisy", "experiment": "exp.csv",
                    "simulation": "sim.csv", "band": [0.5, 30.0],
                    "segment_len": 3200, "overlap": 0.875,
                },
            ]
        }))
        report = run_assessment(load_manifest(path))
        record = next(r for r in report.tests if r.name == "noisy")
        assert record.status == INVALID
        assert "coherence" in record.invalid_reason
        assert "simulation" in record.invalid_reason
        # excluded from aggregation: only the performance index remains
        assert report.verdict.eta_bar_f is None
        assert report.verdict.eta_all == pytest.approx(report.tests[0].index, rel=1e-12)

    def test_degenerate_sample_recorded_not_fatal(self, tmp_path):
        (tmp_path / "s.csv").write_text(
            "name,unit,p_exp,p_sim\nboth_zero,u,0.0,0.0\nok,u,1.0,0.99\n"
        )
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [{"kind": "performance", "name": "p", "file": "s.csv"}]
        }))
        report = run_assessment(load_manifest(path))
        statuses = {r.name: r.status for r in report.tests}
        assert statuses == {"both_zero": INVALID, "ok": ASSESSED}

    def test_no_valid_test_aborts(self, tmp_path):
        (tmp_path / "s.csv").write_text("name,unit,p_exp,p_sim\nboth_zero,u,0.0,0.0\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [{"kind": "performance", "name": "p", "file": "s.csv"}]
        }))
        with pytest.raises(DegenerateDataError, match="no valid test"):
            run_assessment(load_manifest(path))

    def test_constant_experiment_curve_invalid(self, tmp_path):
        t = np.linspace(0.0, 1.0, 50)
        write_series_csv(tmp_path / "exp.csv", TimeSeries(t=t, y=np.ones(50)))
        write_series_csv(tmp_path / "sim.csv", TimeSeries(t=t, y=np.zeros(50)))
        (tmp_path / "one.csv").write_text("name,unit,p_exp,p_sim\nsolo,u,1.0,1.0\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({
            "tests": [
                {"kind": "performance", "name": "p", "file": "one.csv"},
                {"kind": "time", "name": "flat", "experiment": "exp.csv",
                 "simulation": "sim.csv"},
            ]
        }))
        report = run_assessment(load_manifest(path))
        record = next(r for r in report.tests if r.name == "flat")
        assert record.status == INVALID
        assert "constant" in record.invalid_reason


class TestReportSerialization:
    def test_json_round_trip(self, reference_manifest_path):
        report = run_assessment(
            load_manifest(reference_manifest_path), timestamp="2026-01-01T00:00:00+00:00"
        )
        parsed = AssessmentReport.from_json(report.to_json())
        assert parsed == report
        assert parsed.to_json() == report.to_json()

    def test_determinism_with_pinned_timestamp(self, reference_manifest_path):
        stamp = "2026-01-01T00:00:00+00:00"
        a = run_assessment(load_manifest(reference_manifest_path), timestamp=stamp)
        b = run_assessment(load_manifest(reference_manifest_path), timestamp=stamp)
        assert a.to_json() == b.to_json()

    def test_emit_json_and_reload(self, reference_manifest_path, tmp_path):
        report = run_assessment(load_manifest(reference_manifest_path))
        [path] = emit_report(report, "json", tmp_path)
        assert AssessmentReport.from_json(path.read_text()) == report

    def test_markdown_tables(self, reference_manifest_path, tmp_path):
        report = run_assessment(load_manifest(reference_manifest_path))
        [path] = emit_report(report, "md", tmp_path)
        text = path.read_text()
        assert "| Test | Error e | Threshold eps | Index eta |" in text
        for name in ("accel_noise_still", "level_flight", "pitch_sweep"):
            assert name in text
        assert "gate" in text.lower()
        assert "94.37" in text  # time-domain index as a percentage

    def test_markdown_flags_uncertified(self):
        verdict = Verdict(
            eta_bar_p=0.95, eta_bar_t=None, eta_bar_f=None,
            eta_all=0.95, eta_min=0.85, min_source="w", gate_passed=False,
        )
        report = AssessmentReport(
            generated_at="2026-01-01T00:00:00+00:00",
            config=CredibilityConfig(),
            tests=(TestRecord(name="w", kind="performance", status=ASSESSED, index=0.85),),
            verdict=verdict,
            provenance={},
        )
        text = render_markdown(report)
        assert "NOT certified" in text
        assert "FAILED" in text

    def test_plotdata_columns(self, reference_manifest_path, tmp_path):
        report = run_assessment(load_manifest(reference_manifest_path))
        paths = emit_report(report, "plotdata", tmp_path)
        by_name = {p.name: p for p in paths}
        curves = by_name["level_flight_curves.csv"].read_text().splitlines()
        assert curves[0] == "t,y_exp,y_sim,error"
        bode = by_name["pitch_sweep_bode.csv"].read_text().splitlines()
        assert bode[0] == "f,mag_e,mag_s,phase_e,phase_s,coherence"
        assert len(bode) == 301  # header + every experimental grid point in band

    def test_plotdata_needs_fresh_report(self, reference_manifest_path, tmp_path):
        report = run_assessment(load_manifest(reference_manifest_path))
        reloaded = AssessmentReport.from_json(report.to_json())
        with pytest.raises(Exception, match="freshly computed"):
            emit_report(reloaded, "plotdata", tmp_path)

    def test_report_echoes_conventions_and_config(self, reference_manifest_path):
        report = run_assessment(load_manifest(reference_manifest_path))
        doc = report.to_dict()
        assert doc["conventions"]["stddev"] == "population"
        assert doc["config"]["weights"] == {"p": 0.3, "t": 0.3, "f": 0.4}
        assert doc["config"]["k_e"] == pytest.approx(0.75)
        assert doc["provenance"]["inputs_sha256"]