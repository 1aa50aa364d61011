"""Frequency-domain credibility from sweep-test records.

The input/output record of a sweep test is reduced to auto- and
cross-spectra by averaging Hann-tapered, mean-detrended segment
periodograms (one-sided density scaling).  From those the module derives
the frequency response (magnitude in dB, unwrapped phase in degrees) and
the per-frequency coherence, which both gates the validity of a sweep test
and weights the Bode-error averages so unreliable frequency points count
less.

All frequencies are angular (rad/s).  Comparisons between two Bode curves
happen on a common log-spaced grid via linear interpolation in
(log f, dB) / (log f, degrees), the coordinates in which such curves are
closest to piecewise-linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._csvio import fmt_number, join_unit, parse_number, read_rows, split_unit, write_rows
from .core import DEFAULT_CONFIG, CredibilityConfig, normalize
from .errors import CsvError, DegenerateDataError, DomainError, EstimationError
from .timedomain import TimeSeries, _frozen_array

#: Tolerance above 1.0 allowed for coherence before it is treated as a bug.
COHERENCE_TOL = 1e-9

#: Relative non-uniformity of the abscissa tolerated by the estimator.
UNIFORMITY_TOL = 1e-6

#: Default resolution of the common comparison grid for two Bode curves.
POINTS_PER_DECADE = 50


@dataclass(frozen=True)
class SweepRecord:
    """Paired excitation/response signals sampled on one uniform clock."""

    input: TimeSeries
    output: TimeSeries
    sample_rate: float

    def __post_init__(self) -> None:
        if len(self.input) != len(self.output) or not np.array_equal(self.input.t, self.output.t):
            raise DomainError("input and output must share an identical abscissa")
        dt = np.diff(self.input.t)
        mean_dt = float(np.mean(dt))
        if np.max(np.abs(dt - mean_dt)) > UNIFORMITY_TOL * mean_dt:
            raise DomainError(
                f"abscissa must be uniform to {UNIFORMITY_TOL:g} relative for FFT-based estimation"
            )
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0.0):
            raise DomainError(f"sample_rate must be positive, got {self.sample_rate!r}")
        if abs(self.sample_rate * mean_dt - 1.0) > UNIFORMITY_TOL:
            raise DomainError(
                f"sample_rate {self.sample_rate:g} Hz does not match the abscissa spacing {mean_dt:g}"
            )

    @classmethod
    def from_series(cls, input: TimeSeries, output: TimeSeries) -> "SweepRecord":
        """Build a record, deriving the sample rate from the abscissa."""
        dt = (input.t[-1] - input.t[0]) / (len(input) - 1)
        return cls(input=input, output=output, sample_rate=1.0 / float(dt))

    def __len__(self) -> int:
        return len(self.input)


@dataclass(frozen=True)
class SpectralEstimate:
    """Averaged one-sided auto/cross spectra on an angular-frequency grid."""

    freqs: np.ndarray
    g_xx: np.ndarray
    g_yy: np.ndarray
    g_xy: np.ndarray
    n_segments: int

    def __post_init__(self) -> None:
        freqs = _frozen_array(self.freqs, "freqs")
        g_xx = _frozen_array(self.g_xx, "g_xx")
        g_yy = _frozen_array(self.g_yy, "g_yy")
        g_xy = np.array(self.g_xy, dtype=complex)
        g_xy.setflags(write=False)
        if not (len(freqs) == len(g_xx) == len(g_yy) == len(g_xy)):
            raise DomainError("spectral vectors must share one length")
        if np.any(g_xx < 0.0) or np.any(g_yy < 0.0):
            raise DomainError("auto-spectra must be non-negative")
        if not np.all(np.isfinite(g_xy.view(float))):
            raise DomainError("cross-spectrum contains non-finite entries")
        bound = g_xx * g_yy
        if np.any(np.abs(g_xy) ** 2 > bound * (1.0 + COHERENCE_TOL) + np.finfo(float).tiny):
            raise DomainError("cross-spectrum violates the Cauchy-Schwarz bound")
        if self.n_segments < 2:
            raise DomainError("an estimate needs at least 2 averaged segments")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "g_xx", g_xx)
        object.__setattr__(self, "g_yy", g_yy)
        object.__setattr__(self, "g_xy", g_xy)


@dataclass(frozen=True)
class FrequencyResponse:
    """Bode curves plus per-frequency coherence on a shared grid.

    Phase must already be unwrapped: adjacent samples may not jump by 180
    degrees or more.
    """

    freqs: np.ndarray
    magnitude: np.ndarray
    phase: np.ndarray
    coherence: np.ndarray

    def __post_init__(self) -> None:
        freqs = _frozen_array(self.freqs, "freqs")
        magnitude = _frozen_array(self.magnitude, "magnitude")
        phase = _frozen_array(self.phase, "phase")
        coherence = _frozen_array(self.coherence, "coherence")
        if not (len(freqs) == len(magnitude) == len(phase) == len(coherence)):
            raise DomainError("response vectors must share one length")
        if len(freqs) < 1:
            raise DomainError("a frequency response needs at least one grid point")
        if not np.all(freqs > 0.0) or not np.all(np.diff(freqs) > 0.0):
            raise DomainError("frequency grid must be positive and strictly increasing")
        if np.any(coherence <= 0.0) or np.any(coherence > 1.0 + COHERENCE_TOL):
            raise DomainError(f"coherence entries must lie in (0, 1 + {COHERENCE_TOL:g}]")
        # strict unwrapping leaves adjacent jumps at 180 deg at most; the tiny
        # slack absorbs degree-conversion rounding on that boundary
        if np.any(np.abs(np.diff(phase)) > 180.0 + 1e-6):
            raise DomainError(
                "phase jumps by more than 180 degrees between adjacent points; unwrap it first"
            )
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "magnitude", magnitude)
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "coherence", coherence)

    def __len__(self) -> int:
        return len(self.freqs)

    @property
    def band(self) -> tuple[float, float]:
        return float(self.freqs[0]), float(self.freqs[-1])


def _hann_periodic(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def estimate_spectra(
    rec: SweepRecord, segment_len: int, overlap_fraction: float = 0.5
) -> SpectralEstimate:
    """Averaged modified periodograms of a sweep record.

    Each segment is mean-detrended, Hann-tapered and transformed; the
    per-segment spectra are averaged in segment order and scaled to
    one-sided densities compensated for the window power (DC and Nyquist
    bins are not doubled, matching the usual convention).  Fewer than two
    segments are refused: coherence would be identically 1 and meaningless.
    """
    n = len(rec)
    if not (isinstance(segment_len, (int, np.integer)) and 2 <= segment_len <= n):
        raise DomainError(f"segment_len must be an integer in [2, {n}], got {segment_len!r}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise DomainError(f"overlap_fraction must lie in [0, 1), got {overlap_fraction!r}")
    segment_len = int(segment_len)
    step = max(1, int(round(segment_len * (1.0 - overlap_fraction))))
    n_segments = (n - segment_len) // step + 1
    if n_segments < 2:
        raise EstimationError(
            f"only {n_segments} segment(s) of length {segment_len} fit a record of {n} samples; "
            "shorten the segments or raise the overlap"
        )
    window = _hann_periodic(segment_len)
    x = np.asarray(rec.input.y)
    y = np.asarray(rec.output.y)
    acc_xx = np.zeros(segment_len // 2 + 1)
    acc_yy = np.zeros(segment_len // 2 + 1)
    acc_xy = np.zeros(segment_len // 2 + 1, dtype=complex)
    for k in range(n_segments):  # fixed order keeps the reduction bit-identical
        sl = slice(k * step, k * step + segment_len)
        xs = x[sl] - np.mean(x[sl])
        ys = y[sl] - np.mean(y[sl])
        fx = np.fft.rfft(window * xs)
        fy = np.fft.rfft(window * ys)
        acc_xx += np.abs(fx) ** 2
        acc_yy += np.abs(fy) ** 2
        acc_xy += np.conj(fx) * fy
    scale = 2.0 / (rec.sample_rate * np.sum(window**2) * n_segments)
    g_xx = acc_xx * scale
    g_yy = acc_yy * scale
    g_xy = acc_xy * scale
    # one-sided convention: DC (and Nyquist, present for even lengths) are not doubled
    g_xx[0] /= 2.0
    g_yy[0] /= 2.0
    g_xy[0] /= 2.0
    if segment_len % 2 == 0:
        g_xx[-1] /= 2.0
        g_yy[-1] /= 2.0
        g_xy[-1] /= 2.0
    freqs = 2.0 * np.pi * np.fft.rfftfreq(segment_len, 1.0 / rec.sample_rate)
    return SpectralEstimate(
        freqs=freqs, g_xx=g_xx, g_yy=g_yy, g_xy=g_xy, n_segments=n_segments
    )


def coherence(est: SpectralEstimate) -> tuple[np.ndarray, np.ndarray]:
    """Per-frequency coherence ``|g_xy|^2 / (g_xx * g_yy)`` plus a validity mask.

    Grid points with a zero auto-spectrum carry no information and are
    excluded via the mask (their coherence entry is 0).  Values are clamped
    to 1 after checking they do not exceed ``1 + COHERENCE_TOL``.
    """
    valid = (est.g_xx > 0.0) & (est.g_yy > 0.0)
    values = np.zeros(len(est.freqs))
    np.divide(
        np.abs(est.g_xy) ** 2, est.g_xx * est.g_yy, out=values, where=valid
    )
    if np.any(values > 1.0 + COHERENCE_TOL):
        raise EstimationError("coherence exceeds 1 beyond tolerance; estimator bug")
    return np.minimum(values, 1.0), valid


def frequency_response(est: SpectralEstimate) -> FrequencyResponse:
    """Bode curves from an estimate: ``20*log10|g_xy/g_xx|`` and unwrapped
    phase, on the grid points that carry information.

    DC, masked points and points of exactly zero coherence are dropped.
    """
    coh, valid = coherence(est)
    keep = valid & (est.freqs > 0.0) & (coh > 0.0)
    if np.count_nonzero(keep) < 2:
        raise EstimationError("fewer than two usable grid points in the estimate")
    response = est.g_xy[keep] / est.g_xx[keep]
    magnitude = 20.0 * np.log10(np.abs(response))
    phase = np.degrees(np.unwrap(np.angle(response)))
    return FrequencyResponse(
        freqs=est.freqs[keep], magnitude=magnitude, phase=phase, coherence=coh[keep]
    )


def estimate_frf(
    rec: SweepRecord, segment_len: int, overlap_fraction: float = 0.5
) -> FrequencyResponse:
    """Convenience composition of :func:`estimate_spectra` and
    :func:`frequency_response`."""
    return frequency_response(estimate_spectra(rec, segment_len, overlap_fraction))


@dataclass(frozen=True)
class CoherenceCheck:
    """Outcome of the coherence acceptance criterion over a band."""

    passed: bool
    threshold: float
    band: tuple[float, float]
    checked: int
    violations: np.ndarray  # frequencies where coherence fell short

    def __post_init__(self) -> None:
        violations = _frozen_array(self.violations, "violations")
        object.__setattr__(self, "violations", violations)


def check_coherence_criterion(
    fr: FrequencyResponse,
    f_a: float,
    f_b: float,
    config: CredibilityConfig = DEFAULT_CONFIG,
) -> CoherenceCheck:
    """Require coherence >= ``config.eps_co`` at every grid point in
    ``[f_a, f_b]``.

    The band must lie inside the response's grid span and contain at least
    one grid point; on failure the violating frequencies are reported.
    """
    if not (f_a > 0.0 and f_b > f_a):
        raise DomainError(f"band must satisfy 0 < f_a < f_b, got [{f_a!r}, {f_b!r}]")
    lo, hi = fr.band
    if f_a < lo or f_b > hi:
        raise DomainError(
            f"band [{f_a:g}, {f_b:g}] rad/s is outside the response grid [{lo:g}, {hi:g}] rad/s"
        )
    in_band = (fr.freqs >= f_a) & (fr.freqs <= f_b)
    if not np.any(in_band):
        raise DomainError(f"no grid points inside the band [{f_a:g}, {f_b:g}] rad/s")
    short = in_band & (fr.coherence < config.eps_co)
    return CoherenceCheck(
        passed=not np.any(short),
        threshold=config.eps_co,
        band=(float(f_a), float(f_b)),
        checked=int(np.count_nonzero(in_band)),
        violations=fr.freqs[short],
    )


def coherence_weight(eta_co):
    """Reliability weight ``(1 - exp(-eta_co)) / (1 - exp(-1))``.

    Strictly increasing on (0, 1], with full weight exactly at coherence 1,
    so frequency points backed by better data dominate the error averages.
    Accepts a scalar or an array.
    """
    arr = np.asarray(eta_co, dtype=float)
    if arr.size == 0 or np.any(arr <= 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise DomainError("coherence must lie in (0, 1]")
    weight = -np.expm1(-arr) / -np.expm1(-1.0)
    return float(weight) if arr.ndim == 0 else weight


def comparison_grid(
    f_a: float, f_b: float, points_per_decade: int = POINTS_PER_DECADE
) -> np.ndarray:
    """Log-spaced grid over ``[f_a, f_b]`` at the given density."""
    if not (f_a > 0.0 and f_b > f_a):
        raise DomainError(f"band must satisfy 0 < f_a < f_b, got [{f_a!r}, {f_b!r}]")
    if points_per_decade < 1:
        raise DomainError(f"points_per_decade must be >= 1, got {points_per_decade!r}")
    n = max(2, int(round(points_per_decade * math.log10(f_b / f_a))) + 1)
    return np.geomspace(f_a, f_b, n)


def _resample(fr: FrequencyResponse, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    lo, hi = fr.band
    if grid[0] < lo or grid[-1] > hi:
        raise DomainError(
            f"band [{grid[0]:g}, {grid[-1]:g}] rad/s is outside the response grid "
            f"[{lo:g}, {hi:g}] rad/s"
        )
    logf = np.log(fr.freqs)
    logg = np.log(grid)
    return (
        np.interp(logg, logf, fr.magnitude),
        np.interp(logg, logf, fr.phase),
        np.interp(logg, logf, fr.coherence),
    )


def bode_errors(
    fr_exp: FrequencyResponse,
    fr_sim: FrequencyResponse,
    band: tuple[float, float],
    use_weighting: bool = True,
    points_per_decade: int = POINTS_PER_DECADE,
) -> tuple[float, float]:
    """Coherence-weighted RMS differences of the two Bode curves over a band.

    Both responses are resampled onto a common log-spaced grid; weights come
    from the experimental response's coherence (``W == 1`` everywhere when
    weighting is off).  The simulation phase is first shifted by the
    multiple of 360 degrees that minimizes its mean offset from the
    experimental phase, so a wrap-branch mismatch between independently
    unwrapped curves cannot masquerade as error.
    """
    grid = comparison_grid(band[0], band[1], points_per_decade)
    mag_e, pha_e, coh_e = _resample(fr_exp, grid)
    mag_s, pha_s, _ = _resample(fr_sim, grid)
    pha_s = pha_s + 360.0 * round(float(np.mean(pha_e - pha_s)) / 360.0)
    weight = coherence_weight(coh_e) if use_weighting else np.ones(len(grid))
    e_mag = math.sqrt(float(np.mean((weight * (mag_e - mag_s)) ** 2)))
    e_pha = math.sqrt(float(np.mean((weight * (pha_e - pha_s)) ** 2)))
    return e_mag, e_pha


def bode_thresholds(
    fr_exp: FrequencyResponse,
    band: tuple[float, float],
    config: CredibilityConfig = DEFAULT_CONFIG,
    points_per_decade: int = POINTS_PER_DECADE,
) -> tuple[float, float]:
    """Tolerances ``k_p * range`` of the experimental magnitude and phase
    over the band grid.  Flat curves are refused."""
    grid = comparison_grid(band[0], band[1], points_per_decade)
    mag_e, pha_e, _ = _resample(fr_exp, grid)
    mag_range = float(np.max(mag_e) - np.min(mag_e))
    pha_range = float(np.max(pha_e) - np.min(pha_e))
    if mag_range == 0.0 or pha_range == 0.0:
        raise DegenerateDataError(
            "experimental magnitude or phase is flat over the band; "
            "a range-based tolerance is undefined"
        )
    return config.k_p * mag_range, config.k_p * pha_range


def frequency_index(
    e_mag: float,
    eps_mag: float,
    e_pha: float,
    eps_pha: float,
    config: CredibilityConfig = DEFAULT_CONFIG,
) -> tuple[float, float, float]:
    """Magnitude, phase and combined frequency-domain indices.

    The combined index is the RMS of the two partial indices, which keeps
    it between them.
    """
    eta_mag = normalize(e_mag, eps_mag, config)
    eta_pha = normalize(e_pha, eps_pha, config)
    eta_f = math.sqrt(0.5 * (eta_mag * eta_mag + eta_pha * eta_pha))
    return eta_mag, eta_pha, eta_f


_BODE_HEADER = ("f_rad_s", "mag_db", "phase_deg", "coherence")


def read_sweep_csv(path: str | Path) -> SweepRecord:
    """Read a three-column CSV ``t,x,y`` into a :class:`SweepRecord`."""
    path = Path(path)
    header, rows = read_rows(path, min_columns=3)
    if len(header) != 3:
        raise CsvError(f"{path}:1: expected exactly three columns t,x,y, got {len(header)}")
    labels_units = [split_unit(h) for h in header]
    t = np.empty(len(rows))
    x = np.empty(len(rows))
    y = np.empty(len(rows))
    for i, (line_no, fields) in enumerate(rows):
        t[i] = parse_number(fields[0], path, line_no, labels_units[0][0] or "t")
        x[i] = parse_number(fields[1], path, line_no, labels_units[1][0] or "x")
        y[i] = parse_number(fields[2], path, line_no, labels_units[2][0] or "y")
    try:
        return SweepRecord.from_series(
            input=TimeSeries(t=t, y=x, label=labels_units[1][0] or "x",
                             t_unit=labels_units[0][1] or "s", y_unit=labels_units[1][1]),
            output=TimeSeries(t=t, y=y, label=labels_units[2][0] or "y",
                              t_unit=labels_units[0][1] or "s", y_unit=labels_units[2][1]),
        )
    except DomainError as exc:
        raise CsvError(f"{path}: {exc}") from exc


def write_sweep_csv(path: str | Path, rec: SweepRecord) -> None:
    header = [
        join_unit("t", rec.input.t_unit),
        join_unit(rec.input.label or "x", rec.input.y_unit),
        join_unit(rec.output.label or "y", rec.output.y_unit),
    ]
    rows = zip(
        (fmt_number(v) for v in rec.input.t),
        (fmt_number(v) for v in rec.input.y),
        (fmt_number(v) for v in rec.output.y),
    )
    write_rows(path, header, rows)


def read_bode_csv(path: str | Path) -> FrequencyResponse:
    """Read a Bode CSV ``f_rad_s,mag_db,phase_deg,coherence``.

    Phase is unwrapped on import so externally produced (possibly wrapped)
    curves can be compared directly.
    """
    path = Path(path)
    header, rows = read_rows(path, min_columns=4)
    if tuple(header) != _BODE_HEADER:
        raise CsvError(
            f"{path}:1: expected header {','.join(_BODE_HEADER)}, got {','.join(header)}"
        )
    data = np.empty((len(rows), 4))
    for i, (line_no, fields) in enumerate(rows):
        for j, column in enumerate(_BODE_HEADER):
            data[i, j] = parse_number(fields[j], path, line_no, column)
    try:
        return FrequencyResponse(
            freqs=data[:, 0],
            magnitude=data[:, 1],
            phase=np.degrees(np.unwrap(np.radians(data[:, 2]))),
            coherence=data[:, 3],
        )
    except DomainError as exc:
        raise CsvError(f"{path}: {exc}") from exc


def write_bode_csv(path: str | Path, fr: FrequencyResponse) -> None:
    rows = zip(
        (fmt_number(v) for v in fr.freqs),
        (fmt_number(v) for v in fr.magnitude),
        (fmt_number(v) for v in fr.phase),
        (fmt_number(v) for v in fr.coherence),
    )
    write_rows(path, list(_BODE_HEADER), rows)
