"""Scoring scalar performance parameters.

Sensor-noise levels are the classic case: the curves themselves are
stochastic, so they are reduced to summary statistics (population stddev)
and compared as scalars.  The tolerance tracks the experimental magnitude
(k_p fraction), so large quantities get proportionally large tolerances.
"""

import numpy as np

from simcred import (
    CredibilityConfig,
    NoiseSpec,
    TimeSeries,
    corrupt,
    performance_error,
    performance_index,
    performance_threshold,
    summary_sample,
)

rng = np.random.default_rng(42)
t = np.arange(50_000) / 500.0
silence = TimeSeries(t=t, y=np.zeros(len(t)), label="gyro")

# "experiment": a real gyro trace; "simulation": the sensor model's output.
# The vibration tone plays the role of motor-induced contamination.
cases = [
    ("gyro_noise_motors_off", 6.0e-3, 5.9e-3, None),
    ("gyro_noise_motors_on", 4.0e-2, 4.1e-2, (2.0e-2, 150.0)),
]

config = CredibilityConfig()
print(f"{'parameter':<24} {'e_p':>10} {'eps_p':>10} {'eta_p':>8}")
for name, sigma_exp, sigma_sim, vibration in cases:
    trace_exp = corrupt(silence, NoiseSpec(sigma_exp, seed=int(rng.integers(2**31)),
                                           vibration=vibration))
    trace_sim = corrupt(silence, NoiseSpec(sigma_sim, seed=int(rng.integers(2**31)),
                                           vibration=vibration))
    # measurement uncertainty on noise levels is larger than 5%, so use a
    # 10% tolerance for these rows
    sample = summary_sample(name, "rad/s", trace_exp.y, trace_sim.y,
                            "stddev", k_p_override=0.1)
    e = performance_error(sample)
    eps = performance_threshold(sample, config)
    eta = performance_index(sample, config)
    print(f"{name:<24} {e:10.3e} {eps:10.3e} {100 * eta:7.2f}%")

print()
print("direct scalar comparison works the same way, e.g. a settling time:")
from simcred import PerformanceSample

s = PerformanceSample(name="settling_time", unit="s", p_exp=1.82, p_sim=1.75)
print(f"  e = {performance_error(s):.3f} s, eps = {performance_threshold(s):.4f} s "
      f"(5% of 1.82), eta = {100 * performance_index(s):.2f}%")

print()
print("a sample whose experimental value is zero falls back to the")
print("simulated magnitude for its tolerance:")
s = PerformanceSample(name="steady_state_bias", unit="deg", p_exp=0.0, p_sim=0.04)
print(f"  eps = {performance_threshold(s):.4f} deg, eta = {100 * performance_index(s):.2f}%")
