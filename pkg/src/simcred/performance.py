"""Credibility of scalar performance parameters.

A performance test compares one named scalar (a settling time, a noise
standard deviation, a maximum speed, ...) measured on the experiment with
the same scalar produced by the simulation.  The tolerance defaults to a
fraction ``k_p`` of the experimental magnitude so it tracks the size of the
quantity being compared; an explicit tolerance can be supplied instead.

Stochastic signals are assessed here through summary statistics (see
:func:`summary_sample`) rather than through the time-domain curve metric,
which is meaningless for noise-like records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._csvio import fmt_number, parse_number, read_rows, write_rows
from .core import DEFAULT_CONFIG, CredibilityConfig, normalize
from .errors import CsvError, DegenerateDataError, DomainError


@dataclass(frozen=True)
class PerformanceSample:
    """One scalar parameter measured on both systems, in a shared unit."""

    name: str
    unit: str
    p_exp: float
    p_sim: float
    k_p_override: float | None = None
    eps_override: float | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise DomainError("performance sample needs a non-empty name")
        for label, value in (("p_exp", self.p_exp), ("p_sim", self.p_sim)):
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise DomainError(f"sample {self.name!r}: {label} must be finite, got {value!r}")
        if self.k_p_override is not None and not (
            math.isfinite(self.k_p_override) and self.k_p_override > 0.0
        ):
            raise DomainError(f"sample {self.name!r}: k_p override must be > 0")
        if self.eps_override is not None and not (
            math.isfinite(self.eps_override) and self.eps_override > 0.0
        ):
            raise DomainError(f"sample {self.name!r}: eps override must be > 0")


def performance_error(sample: PerformanceSample) -> float:
    """Absolute difference between the experimental and simulated values."""
    return abs(sample.p_exp - sample.p_sim)


def performance_threshold(
    sample: PerformanceSample, config: CredibilityConfig = DEFAULT_CONFIG
) -> float:
    """Error tolerance for one sample.

    An explicit ``eps_override`` wins; otherwise the tolerance is
    ``k_p * |p_exp|``, falling back to ``k_p * |p_sim|`` when the
    experimental value is zero.  A sample where both values are zero cannot
    be thresholded relatively and is refused.
    """
    if sample.eps_override is not None:
        return sample.eps_override
    k_p = sample.k_p_override if sample.k_p_override is not None else config.k_p
    reference = abs(sample.p_exp) if sample.p_exp != 0.0 else abs(sample.p_sim)
    if reference == 0.0:
        raise DegenerateDataError(
            f"sample {sample.name!r}: both values are zero; supply an explicit eps"
        )
    return k_p * reference


def performance_index(
    sample: PerformanceSample, config: CredibilityConfig = DEFAULT_CONFIG
) -> float:
    """Credibility index for one performance sample."""
    return normalize(performance_error(sample), performance_threshold(sample, config), config)


#: Statistics accepted by :func:`summary_sample`.  Standard deviations use
#: the population convention (divide by n), treating the logged record as
#: the whole object of interest; the convention is echoed in reports.
SUMMARY_STATISTICS = ("stddev", "mean", "rms")


def summary_sample(
    name: str,
    unit: str,
    y_exp,
    y_sim,
    statistic: str = "stddev",
    *,
    k_p_override: float | None = None,
    eps_override: float | None = None,
) -> PerformanceSample:
    """Reduce paired raw records to one :class:`PerformanceSample`.

    ``statistic`` is one of ``stddev`` (population), ``mean`` or ``rms``.
    """
    if statistic not in SUMMARY_STATISTICS:
        raise DomainError(f"unknown statistic {statistic!r}; choose from {SUMMARY_STATISTICS}")
    reducers = {
        "stddev": lambda v: float(np.std(v, ddof=0)),
        "mean": lambda v: float(np.mean(v)),
        "rms": lambda v: float(np.sqrt(np.mean(np.square(v)))),
    }
    reduce = reducers[statistic]
    y_exp = np.asarray(y_exp, dtype=float)
    y_sim = np.asarray(y_sim, dtype=float)
    if y_exp.size == 0 or y_sim.size == 0:
        raise DomainError(f"sample {name!r}: empty record")
    if not (np.all(np.isfinite(y_exp)) and np.all(np.isfinite(y_sim))):
        raise DomainError(f"sample {name!r}: records contain non-finite values")
    return PerformanceSample(
        name=name,
        unit=unit,
        p_exp=reduce(y_exp),
        p_sim=reduce(y_sim),
        k_p_override=k_p_override,
        eps_override=eps_override,
    )


_REQUIRED = ("name", "unit", "p_exp", "p_sim")
_OPTIONAL = ("k_p", "eps")


def read_samples_csv(path: str | Path) -> list[PerformanceSample]:
    """Read samples from CSV rows ``name,unit,p_exp,p_sim[,k_p][,eps]``."""
    path = Path(path)
    header, rows = read_rows(path)
    known = _REQUIRED + _OPTIONAL
    unknown = [h for h in header if h not in known]
    if unknown:
        raise CsvError(f"{path}:1: unknown columns {unknown}; expected {list(known)}")
    missing = [h for h in _REQUIRED if h not in header]
    if missing:
        raise CsvError(f"{path}:1: missing required columns {missing}")
    col = {h: i for i, h in enumerate(header)}
    samples = []
    for line_no, fields in rows:
        def cell(key: str) -> str:
            return fields[col[key]] if key in col else ""

        k_p_text, eps_text = cell("k_p"), cell("eps")
        try:
            samples.append(
                PerformanceSample(
                    name=cell("name"),
                    unit=cell("unit"),
                    p_exp=parse_number(cell("p_exp"), path, line_no, "p_exp"),
                    p_sim=parse_number(cell("p_sim"), path, line_no, "p_sim"),
                    k_p_override=parse_number(k_p_text, path, line_no, "k_p") if k_p_text else None,
                    eps_override=parse_number(eps_text, path, line_no, "eps") if eps_text else None,
                )
            )
        except DomainError as exc:
            raise CsvError(f"{path}:{line_no}: {exc}") from exc
    return samples


def write_samples_csv(path: str | Path, samples: list[PerformanceSample]) -> None:
    rows = [
        [
            s.name,
            s.unit,
            fmt_number(s.p_exp),
            fmt_number(s.p_sim),
            "" if s.k_p_override is None else fmt_number(s.k_p_override),
            "" if s.eps_override is None else fmt_number(s.eps_override),
        ]
        for s in samples
    ]
    write_rows(path, list(_REQUIRED + _OPTIONAL), rows)
