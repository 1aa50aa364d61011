"""Synthetic paired datasets with known ground truth.

A desk-scale stand-in for a physical test bench: a canonical second-order
plant, logarithmic sweep excitation, seeded sensor-like noise, and a few
shaped reference curves.  Everything is deterministic for a fixed seed, and
the analytic plant response doubles as the independent oracle for the
spectral estimator.

Gaussian noise comes from numpy's seeded PCG64 generator; the contract is
reproducible statistics per seed, not a portable bitstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DomainError
from .performance import PerformanceSample, summary_sample, write_samples_csv
from .spectral import FrequencyResponse, SweepRecord, write_sweep_csv
from .timedomain import TimeSeries, write_series_csv


@dataclass(frozen=True)
class SecondOrderPlant:
    """Canonical second-order system ``k*wn^2 / (s^2 + 2*zeta*wn*s + wn^2)``."""

    natural_freq: float  # rad/s
    damping: float
    gain: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.natural_freq) and self.natural_freq > 0.0):
            raise DomainError(f"natural_freq must be > 0, got {self.natural_freq!r}")
        if not (math.isfinite(self.damping) and self.damping > 0.0):
            raise DomainError(f"damping must be > 0, got {self.damping!r}")
        if not (math.isfinite(self.gain) and self.gain != 0.0):
            raise DomainError(f"gain must be non-zero, got {self.gain!r}")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise plus an optional sinusoidal contamination
    (amplitude, angular frequency) mimicking motor vibration on a sensor."""

    stddev: float
    seed: int = 0
    vibration: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.stddev) and self.stddev >= 0.0):
            raise DomainError(f"stddev must be >= 0, got {self.stddev!r}")
        if self.vibration is not None:
            amp, freq = self.vibration
            if not (math.isfinite(amp) and math.isfinite(freq) and freq > 0.0):
                raise DomainError(f"vibration must be (amplitude, freq>0), got {self.vibration!r}")


def log_sweep(
    f_start: float,
    f_end: float,
    duration: float,
    sample_rate: float,
    amplitude: float = 1.0,
    label: str = "sweep",
) -> TimeSeries:
    """Logarithmic chirp whose instantaneous angular frequency glides from
    ``f_start`` to ``f_end`` (rad/s) over ``duration`` seconds.

    The end frequency must stay below Nyquist (``pi * sample_rate``).
    """
    if not (0.0 < f_start < f_end):
        raise DomainError(f"need 0 < f_start < f_end, got {f_start!r}, {f_end!r}")
    if f_end >= math.pi * sample_rate:
        raise DomainError(
            f"f_end {f_end:g} rad/s reaches Nyquist ({math.pi * sample_rate:g} rad/s)"
        )
    if duration <= 0.0 or amplitude <= 0.0:
        raise DomainError("duration and amplitude must be > 0")
    n = int(round(duration * sample_rate)) + 1
    t = np.arange(n) / sample_rate
    ratio = f_end / f_start
    # phase(t) = integral of f_start * ratio**(t/T) dt
    phase = f_start * duration / math.log(ratio) * (np.power(ratio, t / duration) - 1.0)
    return TimeSeries(t=t, y=amplitude * np.sin(phase), label=label)


def _sweep_phase(f_start: float, f_end: float, duration: float, t: np.ndarray) -> np.ndarray:
    """Phase function of :func:`log_sweep`, exposed for oracle checks."""
    ratio = f_end / f_start
    return f_start * duration / math.log(ratio) * (np.power(ratio, t / duration) - 1.0)


def simulate_response(plant: SecondOrderPlant, input: TimeSeries) -> TimeSeries:
    """Response of the plant to an input signal, from rest.

    Fixed-step classical fourth-order integration at the input sample rate;
    the input is interpolated linearly at half steps.  Requires a uniform
    abscissa.
    """
    dt_all = np.diff(input.t)
    dt = float(np.mean(dt_all))
    if np.max(np.abs(dt_all - dt)) > 1e-6 * dt:
        raise DomainError("simulate_response requires a uniform abscissa")
    wn = plant.natural_freq
    w2 = wn * wn
    tz = 2.0 * plant.damping * wn
    kw2 = plant.gain * w2
    u = np.asarray(input.y, dtype=float)
    n = len(u)
    out = np.empty(n)
    umid = 0.5 * (u[:-1] + u[1:])
    pos = 0.0
    vel = 0.0
    out[0] = pos
    h = dt
    for i in range(n - 1):
        u0 = u[i]
        um = umid[i]
        u1 = u[i + 1]
        k1p = vel
        k1v = kw2 * u0 - tz * vel - w2 * pos
        p2 = pos + 0.5 * h * k1p
        v2 = vel + 0.5 * h * k1v
        k2p = v2
        k2v = kw2 * um - tz * v2 - w2 * p2
        p3 = pos + 0.5 * h * k2p
        v3 = vel + 0.5 * h * k2v
        k3p = v3
        k3v = kw2 * um - tz * v3 - w2 * p3
        p4 = pos + h * k3p
        v4 = vel + h * k3v
        k4p = v4
        k4v = kw2 * u1 - tz * v4 - w2 * p4
        pos += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        vel += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        out[i + 1] = pos
    return TimeSeries(
        t=input.t, y=out, label=f"{input.label}_response" if input.label else "response",
        t_unit=input.t_unit,
    )


def analytic_bode(plant: SecondOrderPlant, freqs) -> FrequencyResponse:
    """Exact frequency response of the plant on the given grid (rad/s).

    Phase comes out naturally unwrapped; coherence is identically 1.
    """
    w = np.asarray(freqs, dtype=float)
    if np.any(w <= 0.0):
        raise DomainError("analytic_bode needs strictly positive frequencies")
    wn = plant.natural_freq
    denom_re = wn * wn - w * w
    denom_im = 2.0 * plant.damping * wn * w
    h_mag = abs(plant.gain) * wn * wn / np.hypot(denom_re, denom_im)
    phase = -np.arctan2(denom_im, denom_re)
    if plant.gain < 0.0:
        phase = phase + math.pi
    return FrequencyResponse(
        freqs=w,
        magnitude=20.0 * np.log10(h_mag),
        phase=np.degrees(phase),
        coherence=np.ones(len(w)),
    )


def corrupt(series: TimeSeries, spec: NoiseSpec) -> TimeSeries:
    """Series plus seeded Gaussian noise and the optional vibration tone."""
    if spec.stddev == 0.0 and spec.vibration is None:
        return series
    y = np.array(series.y)
    if spec.stddev > 0.0:
        rng = np.random.default_rng(spec.seed)
        y += rng.normal(0.0, spec.stddev, len(y))
    if spec.vibration is not None:
        amp, freq = spec.vibration
        y += amp * np.sin(freq * series.t)
    return replace(series, y=y)


def sweep_response_record(
    plant: SecondOrderPlant,
    sweep: TimeSeries,
    noise: NoiseSpec | None = None,
) -> SweepRecord:
    """Drive the plant with a sweep and package the (input, noisy output)
    pair as a :class:`SweepRecord`."""
    response = simulate_response(plant, sweep)
    if noise is not None:
        response = corrupt(response, noise)
    return SweepRecord.from_series(input=sweep, output=response)


def step_series(
    t_start: float,
    t_end: float,
    n: int,
    low: float,
    high: float,
    rise_fraction: float = 0.2,
    label: str = "step",
) -> TimeSeries:
    """Smooth step from ``low`` to ``high`` (smoothstep transition around the
    middle of the record).  Attains both levels exactly, so its range is
    exactly ``high - low``."""
    if n < 2:
        raise DomainError("step_series needs n >= 2")
    if not 0.0 < rise_fraction <= 1.0:
        raise DomainError(f"rise_fraction must lie in (0, 1], got {rise_fraction!r}")
    t = np.linspace(t_start, t_end, n)
    mid = 0.5 * (t_start + t_end)
    half_rise = 0.5 * rise_fraction * (t_end - t_start)
    u = np.clip((t - (mid - half_rise)) / (2.0 * half_rise), 0.0, 1.0)
    s = u * u * (3.0 - 2.0 * u)
    # convex combination lands exactly on both levels
    y = low * (1.0 - s) + high * s
    return TimeSeries(t=t, y=y, label=label)


def graded_bode(
    band: tuple[float, float],
    n_points: int,
    mag_drop_db: float,
    phase_drop_deg: float,
    mag_start_db: float = 0.0,
    phase_start_deg: float = 0.0,
) -> FrequencyResponse:
    """Monotone Bode-like curves over a band with exact end-to-end spans.

    Magnitude falls smoothly from ``mag_start_db`` by ``mag_drop_db``; phase
    falls from ``phase_start_deg`` by ``phase_drop_deg`` (smoothstep in log
    frequency).  Because the curves are monotone and hit both endpoints,
    their range over the band is exact under any resampling that includes
    the endpoints.  Coherence is identically 1.
    """
    f_a, f_b = band
    if not (0.0 < f_a < f_b):
        raise DomainError(f"band must satisfy 0 < f_a < f_b, got {band!r}")
    if n_points < 2:
        raise DomainError("graded_bode needs n_points >= 2")
    if mag_drop_db <= 0.0 or phase_drop_deg <= 0.0:
        raise DomainError("mag_drop_db and phase_drop_deg must be > 0")
    freqs = np.geomspace(f_a, f_b, n_points)
    u = np.log(freqs / f_a) / math.log(f_b / f_a)
    shape = u * u * (3.0 - 2.0 * u)
    return FrequencyResponse(
        freqs=freqs,
        magnitude=mag_start_db - mag_drop_db * shape,
        phase=phase_start_deg - phase_drop_deg * shape,
        coherence=np.ones(n_points),
    )


# ---------------------------------------------------------------------------
# one-command demo dataset


def write_demo_dataset(out_dir: str | Path, seed: int = 0) -> Path:
    """Emit a complete demo dataset plus a ready-to-run manifest.

    The "experiment" comes from a reference plant with sensor-like noise;
    the "simulation" comes from a slightly mistuned plant.  Both see the
    same excitations.  Returns the manifest path.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    real = SecondOrderPlant(natural_freq=10.0, damping=0.30, gain=2.0)
    model = SecondOrderPlant(natural_freq=10.2, damping=0.29, gain=2.02)

    # performance: noise/vibration statistics of sensor-like records; traces
    # are long enough that sampling wobble stays well inside the tolerance
    rng = np.random.default_rng(seed)
    t = np.arange(100_000) / 500.0
    quiet = TimeSeries(t=t, y=np.zeros(len(t)), label="gyro")
    samples: list[PerformanceSample] = []
    for name, sigma_exp, sigma_sim, vib in (
        ("gyro_noise_quiet", 6.0e-3, 5.91e-3, None),
        ("gyro_noise_vibrating", 4.0e-2, 4.06e-2, (2.0e-2, 150.0)),
        ("accel_noise_quiet", 4.0e-4, 4.06e-4, None),
        ("accel_noise_vibrating", 7.0e-3, 6.9e-3, (3.0e-3, 150.0)),
    ):
        trace_exp = corrupt(quiet, NoiseSpec(sigma_exp, seed=int(rng.integers(2**31)), vibration=vib))
        trace_sim = corrupt(quiet, NoiseSpec(sigma_sim, seed=int(rng.integers(2**31)), vibration=vib))
        samples.append(
            summary_sample(name, "rad/s", trace_exp.y, trace_sim.y, "stddev", k_p_override=0.1)
        )
    perf_path = out / "perf_sensors.csv"
    write_samples_csv(perf_path, samples)

    # time domain: step command through both plants, noise on the experiment
    step = step_series(0.0, 12.0, 6001, 0.0, 0.35, rise_fraction=0.05, label="pitch_cmd")
    exp_step = corrupt(
        simulate_response(real, step), NoiseSpec(1.5e-3, seed=int(rng.integers(2**31)))
    )
    sim_step = simulate_response(model, step)
    time_exp_path = out / "step_exp.csv"
    time_sim_path = out / "step_sim.csv"
    write_series_csv(time_exp_path, exp_step)
    write_series_csv(time_sim_path, sim_step)

    # frequency domain: identical log sweep through both plants, noise 40 dB
    # below the response rms
    sweep = log_sweep(0.25, 40.0, duration=90.0, sample_rate=250.0, label="torque_cmd")

    def noisy_record(resp: TimeSeries) -> SweepRecord:
        sigma = float(np.sqrt(np.mean(np.square(resp.y)))) / 100.0
        return SweepRecord.from_series(
            input=sweep, output=corrupt(resp, NoiseSpec(sigma, seed=int(rng.integers(2**31))))
        )

    exp_rec = noisy_record(simulate_response(real, sweep))
    sim_rec = noisy_record(simulate_response(model, sweep))
    freq_exp_path = out / "sweep_exp.csv"
    freq_sim_path = out / "sweep_sim.csv"
    write_sweep_csv(freq_exp_path, exp_rec)
    write_sweep_csv(freq_sim_path, sim_rec)

    manifest = {
        "config": {"weights": "dynamics-weighted"},
        "tests": [
            {"kind": "performance", "name": "sensor_statistics", "file": perf_path.name},
            {
                "kind": "time",
                "name": "pitch_step",
                "experiment": time_exp_path.name,
                "simulation": time_sim_path.name,
                "smooth_window": 21,
            },
            {
                "kind": "frequency",
                "name": "pitch_sweep",
                "experiment": freq_exp_path.name,
                "simulation": freq_sim_path.name,
                "band": [0.6, 30.0],
                "segment_len": 3200,
                "overlap": 0.875,
            },
        ],
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest_path
