"""Credibility of time-domain response curves.

The experiment and simulation curves are brought onto a shared uniform grid
spanning the overlap of their records (linear interpolation), optionally
smoothed, and compared through the root-mean-square pointwise error.  The
tolerance is a fraction ``k_p`` of the experimental curve's range on that
grid, so flat reference curves are refused rather than silently scored.

The independent variable does not have to be time: any monotone abscissa
(throttle, angle, ...) works the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ._csvio import fmt_number, join_unit, parse_number, read_rows, split_unit, write_rows
from .core import DEFAULT_CONFIG, CredibilityConfig, normalize
from .errors import AlignmentError, CsvError, DegenerateDataError, DomainError


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly ordered samples ``y(t)`` with unit metadata.

    The abscissa must be strictly increasing; both vectors must be finite
    and hold at least two samples.  Arrays are copied and frozen so a series
    can be shared freely between threads.
    """

    t: np.ndarray
    y: np.ndarray
    label: str = ""
    t_unit: str = "s"
    y_unit: str = ""

    def __post_init__(self) -> None:
        t = _frozen_array(self.t, "abscissa")
        y = _frozen_array(self.y, "values")
        if len(t) != len(y):
            raise DomainError(f"abscissa and values differ in length: {len(t)} vs {len(y)}")
        if len(t) < 2:
            raise DomainError("a series needs at least two samples")
        if not np.all(np.diff(t) > 0.0):
            raise DomainError("abscissa must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])


@dataclass(frozen=True)
class AlignedPair:
    """Experiment and simulation values on one shared grid."""

    grid: np.ndarray
    y_exp: np.ndarray
    y_sim: np.ndarray

    def __post_init__(self) -> None:
        grid = _frozen_array(self.grid, "grid")
        y_exp = _frozen_array(self.y_exp, "y_exp")
        y_sim = _frozen_array(self.y_sim, "y_sim")
        if not (len(grid) == len(y_exp) == len(y_sim)):
            raise DomainError("grid and value vectors must share one length")
        if len(grid) < 2:
            raise DomainError("an aligned pair needs at least two grid points")
        if not np.all(np.diff(grid) > 0.0):
            raise DomainError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "y_exp", y_exp)
        object.__setattr__(self, "y_sim", y_sim)

    def __len__(self) -> int:
        return len(self.grid)


def align(exp: TimeSeries, sim: TimeSeries, n_t: int | None = None) -> AlignedPair:
    """Evaluate both curves on a uniform grid over their overlap.

    The grid holds ``n_t`` equally spaced points spanning
    ``[max(starts), min(ends)]``; values come from linear interpolation
    between neighboring samples.  When ``n_t`` is omitted it defaults to the
    number of experimental samples inside the overlap (the experiment is the
    reference signal), floored at 2.
    """
    lo = max(exp.t[0], sim.t[0])
    hi = min(exp.t[-1], sim.t[-1])
    if not hi > lo:
        raise AlignmentError(
            f"records do not overlap: [{exp.t[0]:g}, {exp.t[-1]:g}] vs [{sim.t[0]:g}, {sim.t[-1]:g}]"
        )
    if n_t is None:
        n_t = max(2, int(np.count_nonzero((exp.t >= lo) & (exp.t <= hi))))
    if not (isinstance(n_t, (int, np.integer)) and n_t >= 2):
        raise DomainError(f"n_t must be an integer >= 2, got {n_t!r}")
    grid = np.linspace(lo, hi, int(n_t))
    return AlignedPair(
        grid=grid,
        y_exp=np.interp(grid, exp.t, exp.y),
        y_sim=np.interp(grid, sim.t, sim.y),
    )


def smooth(series: TimeSeries, window: int) -> TimeSeries:
    """Centered moving average with shrinking symmetric end windows.

    ``window`` must be odd and no longer than the series; ``window == 1``
    returns the input unchanged.  Averaging never widens the value range.
    """
    if not (isinstance(window, (int, np.integer)) and window >= 1):
        raise DomainError(f"window must be a positive integer, got {window!r}")
    if window % 2 == 0:
        raise DomainError(f"window must be odd, got {window}")
    if window > len(series):
        raise DomainError(f"window {window} exceeds series length {len(series)}")
    if window == 1:
        return series
    n = len(series)
    idx = np.arange(n)
    half = np.minimum(np.minimum(idx, n - 1 - idx), window // 2)
    csum = np.concatenate(([0.0], np.cumsum(series.y)))
    lo = idx - half
    hi = idx + half + 1
    averaged = (csum[hi] - csum[lo]) / (hi - lo)
    return replace(series, y=averaged)


def time_domain_error(pair: AlignedPair) -> float:
    """Root-mean-square pointwise difference between the two curves."""
    diff = pair.y_exp - pair.y_sim
    return float(np.sqrt(np.mean(np.square(diff))))


def time_domain_threshold(
    pair: AlignedPair, config: CredibilityConfig = DEFAULT_CONFIG
) -> float:
    """Tolerance ``k_p * range(y_exp)`` over the aligned grid.

    The largest pairwise difference of a curve with itself is exactly its
    max-minus-min range.  A constant experimental curve has no range to
    scale and is refused.
    """
    value_range = float(np.max(pair.y_exp) - np.min(pair.y_exp))
    if value_range == 0.0:
        raise DegenerateDataError(
            "experimental curve is constant on the aligned grid; "
            "a range-based tolerance is undefined"
        )
    return config.k_p * value_range


def time_domain_index(pair: AlignedPair, config: CredibilityConfig = DEFAULT_CONFIG) -> float:
    """Credibility index for an aligned pair of curves."""
    return normalize(time_domain_error(pair), time_domain_threshold(pair, config), config)


def read_series_csv(path: str | Path, label: str | None = None) -> TimeSeries:
    """Read a two-column CSV ``t,y``; the header carries units, e.g.
    ``t[s],pitch[rad]``."""
    path = Path(path)
    header, rows = read_rows(path, min_columns=2)
    if len(header) != 2:
        raise CsvError(f"{path}:1: expected exactly two columns t,y, got {len(header)}")
    t_label, t_unit = split_unit(header[0])
    y_label, y_unit = split_unit(header[1])
    t = np.empty(len(rows))
    y = np.empty(len(rows))
    for i, (line_no, fields) in enumerate(rows):
        t[i] = parse_number(fields[0], path, line_no, t_label or "t")
        y[i] = parse_number(fields[1], path, line_no, y_label or "y")
    try:
        return TimeSeries(
            t=t, y=y, label=label if label is not None else (y_label or path.stem),
            t_unit=t_unit, y_unit=y_unit,
        )
    except DomainError as exc:
        raise CsvError(f"{path}: {exc}") from exc


def write_series_csv(path: str | Path, series: TimeSeries) -> None:
    header = [join_unit("t", series.t_unit), join_unit(series.label or "y", series.y_unit)]
    rows = zip((fmt_number(v) for v in series.t), (fmt_number(v) for v in series.y))
    write_rows(path, header, rows)
