"""Generator and plant-oracle tests."""

import math

import numpy as np
import pytest
from scipy import signal

from simcred import (
    DomainError,
    NoiseSpec,
    SecondOrderPlant,
    TimeSeries,
    analytic_bode,
    corrupt,
    graded_bode,
    log_sweep,
    simulate_response,
    step_series,
)
from simcred.spectral import bode_errors, estimate_frf
from simcred.synthgen import _sweep_phase, sweep_response_record


class TestLogSweep:
    def test_instantaneous_frequency_at_endpoints(self):
        f0, f1, T = 0.5, 80.0, 30.0
        # the phase derivative is the instantaneous angular frequency
        h = 1e-6
        d0 = (_sweep_phase(f0, f1, T, np.array([h])) - _sweep_phase(f0, f1, T, np.array([0.0]))) / h
        dT = (
            _sweep_phase(f0, f1, T, np.array([T])) - _sweep_phase(f0, f1, T, np.array([T - h]))
        ) / h
        assert d0[0] == pytest.approx(f0, rel=1e-4)
        assert dT[0] == pytest.approx(f1, rel=1e-4)

    def test_amplitude_bound(self):
        sweep = log_sweep(0.25, 40.0, duration=60.0, sample_rate=200.0, amplitude=2.5)
        assert np.max(np.abs(sweep.y)) <= 2.5
        assert np.max(np.abs(sweep.y)) == pytest.approx(2.5, rel=1e-3)

    def test_nyquist_violation(self):
        with pytest.raises(DomainError, match="Nyquist"):
            log_sweep(1.0, 400.0, duration=10.0, sample_rate=100.0)

    def test_bad_band(self):
        with pytest.raises(DomainError):
            log_sweep(5.0, 1.0, duration=10.0, sample_rate=100.0)

    def test_deterministic(self):
        a = log_sweep(0.25, 40.0, duration=5.0, sample_rate=100.0)
        b = log_sweep(0.25, 40.0, duration=5.0, sample_rate=100.0)
        assert np.array_equal(a.y, b.y)


class TestSimulateResponse:
    def test_step_reaches_dc_gain(self):
        # final value of k*wn^2/(s^2+2 z wn s+wn^2) driven by a unit step is k
        plant = SecondOrderPlant(natural_freq=8.0, damping=0.7, gain=3.0)
        t = np.arange(4000) / 200.0
        step = TimeSeries(t=t, y=np.ones(len(t)))
        out = simulate_response(plant, step)
        assert out.y[-1] == pytest.approx(3.0, rel=1e-3)

    def test_resonant_amplitude_ratio(self):
        # |H(j wn)| = 1 / (2 zeta) for unit gain
        plant = SecondOrderPlant(natural_freq=10.0, damping=0.5, gain=1.0)
        fs = 200.0
        t = np.arange(int(60 * fs)) / fs
        drive = TimeSeries(t=t, y=np.sin(10.0 * t))
        out = simulate_response(plant, drive)
        steady = out.y[-int(10 * fs):]
        assert np.max(np.abs(steady)) == pytest.approx(1.0 / (2.0 * 0.5), rel=1e-2)

    def test_zero_input_zero_output(self):
        plant = SecondOrderPlant(natural_freq=5.0, damping=0.4)
        t = np.arange(100) / 50.0
        out = simulate_response(plant, TimeSeries(t=t, y=np.zeros(len(t))))
        assert np.all(out.y == 0.0)

    def test_non_uniform_abscissa_rejected(self):
        t = np.concatenate([np.arange(50) / 50.0, [1.5]])
        with pytest.raises(DomainError, match="uniform"):
            simulate_response(SecondOrderPlant(5.0, 0.4), TimeSeries(t=t, y=np.zeros(51)))

    def test_matches_scipy_lsim(self):
        plant = SecondOrderPlant(natural_freq=10.0, damping=0.5, gain=1.0)
        fs = 200.0
        t = np.arange(int(20 * fs)) / fs
        u = np.sin(10.0 * t) + 0.5 * np.sin(3.0 * t)
        mine = simulate_response(plant, TimeSeries(t=t, y=u)).y
        lti = signal.lti([100.0], [1.0, 10.0, 100.0])
        _, theirs, _ = signal.lsim(lti, u, t)
        assert np.max(np.abs(mine - theirs)) < 1e-6


class TestAnalyticBode:
    def test_dc_gain_and_phase(self):
        plant = SecondOrderPlant(natural_freq=10.0, damping=0.3, gain=2.0)
        fr = analytic_bode(plant, [1e-4, 1e-3])
        assert fr.magnitude[0] == pytest.approx(20.0 * math.log10(2.0), abs=1e-4)
        assert fr.phase[0] == pytest.approx(0.0, abs=0.01)

    def test_phase_at_natural_frequency(self):
        plant = SecondOrderPlant(natural_freq=10.0, damping=0.3, gain=2.0)
        fr = analytic_bode(plant, [10.0])
        assert fr.phase[0] == pytest.approx(-90.0, abs=1e-9)

    def test_high_frequency_rolloff(self):
        # two decades above wn the slope settles at -40 dB/decade
        plant = SecondOrderPlant(natural_freq=1.0, damping=0.3, gain=1.0)
        fr = analytic_bode(plant, [1e2, 1e3, 1e4])
        assert fr.magnitude[1] - fr.magnitude[0] == pytest.approx(-40.0, abs=0.01)
        assert fr.magnitude[2] - fr.magnitude[1] == pytest.approx(-40.0, abs=0.001)

    def test_negative_gain_offsets_phase(self):
        plant = SecondOrderPlant(natural_freq=10.0, damping=0.3, gain=-2.0)
        fr = analytic_bode(plant, [0.001])
        assert fr.phase[0] == pytest.approx(180.0, abs=0.1)

    def test_coherence_is_one(self):
        fr = analytic_bode(SecondOrderPlant(3.0, 0.4), np.geomspace(0.1, 30.0, 50))
        assert np.all(fr.coherence == 1.0)

    def test_rejects_nonpositive_frequencies(self):
        with pytest.raises(DomainError):
            analytic_bode(SecondOrderPlant(3.0, 0.4), [0.0, 1.0])


class TestCorrupt:
    def make_series(self, n=1000):
        t = np.arange(n) / 100.0
        return TimeSeries(t=t, y=np.sin(t))

    def test_noiseless_identity(self):
        s = self.make_series()
        assert corrupt(s, NoiseSpec(stddev=0.0)) is s

    def test_deterministic_per_seed(self):
        s = self.make_series()
        a = corrupt(s, NoiseSpec(stddev=0.1, seed=42))
        b = corrupt(s, NoiseSpec(stddev=0.1, seed=42))
        c = corrupt(s, NoiseSpec(stddev=0.1, seed=43))
        assert np.array_equal(a.y, b.y)
        assert not np.array_equal(a.y, c.y)

    def test_noise_level_statistics(self):
        s = self.make_series(n=200_000)
        sigma = 0.37
        out = corrupt(s, NoiseSpec(stddev=sigma, seed=7))
        measured = float(np.std(out.y - s.y, ddof=0))
        assert measured == pytest.approx(sigma, rel=0.05)

    def test_vibration_tone(self):
        s = self.make_series()
        out = corrupt(s, NoiseSpec(stddev=0.0, vibration=(0.5, 20.0)))
        assert out.y - s.y == pytest.approx(0.5 * np.sin(20.0 * s.t), abs=1e-12)


class TestShapedGenerators:
    def test_step_series_exact_range(self):
        s = step_series(0.0, 10.0, 501, low=-0.1, high=0.25)
        assert float(np.min(s.y)) == -0.1
        assert float(np.max(s.y)) == 0.25

    def test_graded_bode_exact_spans(self):
        fr = graded_bode((0.25, 40.0), 300, mag_drop_db=41.0, phase_drop_deg=272.0)
        assert float(np.max(fr.magnitude) - np.min(fr.magnitude)) == pytest.approx(41.0, abs=1e-12)
        assert float(np.max(fr.phase) - np.min(fr.phase)) == pytest.approx(272.0, abs=1e-12)
        assert np.all(np.diff(fr.magnitude) <= 0.0)


class TestModelMismatchOrdering:
    def test_index_monotone_in_plant_mismatch(self):
        # assessing a model against a slightly perturbed twin must score
        # better than against a strongly perturbed one
        base = SecondOrderPlant(natural_freq=10.0, damping=0.3, gain=2.0)
        sweep = log_sweep(0.25, 40.0, duration=60.0, sample_rate=200.0)
        rec = sweep_response_record(base, sweep)
        fr_exp = estimate_frf(rec, 4096, 0.75)

        def eta_f_for(factor):
            other = SecondOrderPlant(
                natural_freq=base.natural_freq * factor, damping=0.3, gain=2.0
            )
            fr_sim = estimate_frf(sweep_response_record(other, sweep), 4096, 0.75)
            from simcred.spectral import bode_thresholds, frequency_index

            band = (0.5, 30.0)
            e_mag, e_pha = bode_errors(fr_exp, fr_sim, band)
            eps_mag, eps_pha = bode_thresholds(fr_exp, band)
            return frequency_index(e_mag, eps_mag, e_pha, eps_pha)[2]

        assert eta_f_for(1.02) > eta_f_for(1.2)
