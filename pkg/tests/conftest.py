"""Shared fixtures: a reference dataset whose errors and tolerances are
engineered to known values, written out as a manifest + data files."""

import json
from dataclasses import replace

import numpy as np
import pytest

from simcred import (
    PerformanceSample,
    TimeSeries,
    graded_bode,
    write_bode_csv,
    write_samples_csv,
    write_series_csv,
)

#: (name, eps, error) rows with the 10% tolerance rule; p_exp = 10 * eps.
SENSOR_ROWS = (
    ("accel_noise_still", 6.0e-4, 2.0e-4),
    ("accel_noise_vibrating", 4.0e-3, 7.0e-4),
    ("gyro_noise_still", 4.0e-6, 1.4e-6),
    ("gyro_noise_vibrating", 7.0e-5, 1.4e-5),
)

#: expected per-row indices and their RMS average
SENSOR_INDICES = (0.913, 0.974, 0.906, 0.966)
SENSOR_AVERAGE = 0.940

STEP_RANGE = 0.35  # -> tolerance 0.0175 at k_p = 5%
STEP_RMS_ERROR = 0.0046  # -> index 94.4%

BODE_MAG_SPAN = 41.0  # dB -> tolerance 2.05
BODE_PHASE_SPAN = 272.0  # deg -> tolerance 13.6
BODE_MAG_ERROR = 0.364  # dB -> index 97.3%
BODE_PHASE_ERROR = 2.27  # deg -> index 97.6%


def sensor_samples():
    return [
        PerformanceSample(
            name=name, unit="rad/s", p_exp=10.0 * eps, p_sim=10.0 * eps - err,
            k_p_override=0.1,
        )
        for name, eps, err in SENSOR_ROWS
    ]


def step_pair(n=2000, rms_error=STEP_RMS_ERROR):
    """Step-like curve of range STEP_RANGE plus a twin offset by a full-cycle
    sine whose RMS is exactly ``rms_error``."""
    t = np.linspace(0.0, 20.0, n)
    y_exp = np.interp(t, [0.0, 8.0, 12.0, 20.0], [0.0, 0.0, STEP_RANGE, STEP_RANGE])
    wave = np.sin(2.0 * np.pi * 25.0 * np.arange(n) / n)
    y_sim = y_exp + rms_error * np.sqrt(2.0) * wave
    return (
        TimeSeries(t=t, y=y_exp, label="speed", y_unit="m/s"),
        TimeSeries(t=t, y=y_sim, label="speed", y_unit="m/s"),
    )


def bode_pair(n=300):
    """Monotone Bode curves with exact spans plus a twin offset by constant
    magnitude/phase errors; coherence is 1 so weighting is a no-op."""
    fr_exp = graded_bode(
        (0.25, 40.0), n, mag_drop_db=BODE_MAG_SPAN, phase_drop_deg=BODE_PHASE_SPAN,
        mag_start_db=5.0,
    )
    fr_sim = replace(
        fr_exp,
        magnitude=fr_exp.magnitude - BODE_MAG_ERROR,
        phase=fr_exp.phase + BODE_PHASE_ERROR,
    )
    return fr_exp, fr_sim


def write_reference_dataset(directory):
    """Write the full reference dataset and its manifest; returns the path."""
    directory.mkdir(parents=True, exist_ok=True)
    write_samples_csv(directory / "sensors.csv", sensor_samples())
    exp_step, sim_step = step_pair()
    write_series_csv(directory / "step_exp.csv", exp_step)
    write_series_csv(directory / "step_sim.csv", sim_step)
    fr_exp, fr_sim = bode_pair()
    write_bode_csv(directory / "bode_exp.csv", fr_exp)
    write_bode_csv(directory / "bode_sim.csv", fr_sim)
    manifest = {
        "config": {"weights": "dynamics-weighted"},
        "tests": [
            {"kind": "performance", "name": "sensor_noise", "file": "sensors.csv"},
            {
                "kind": "time",
                "name": "level_flight",
                "experiment": "step_exp.csv",
                "simulation": "step_sim.csv",
            },
            {
                "kind": "frequency",
                "name": "pitch_sweep",
                "experiment": "bode_exp.csv",
                "simulation": "bode_sim.csv",
                "data": "bode",
            },
        ],
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


@pytest.fixture(scope="session")
def reference_manifest_path(tmp_path_factory):
    return write_reference_dataset(tmp_path_factory.mktemp("reference"))
