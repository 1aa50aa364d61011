"""Combining per-test indices into category, overall and worst-case scores.

Category scores are the root-mean-square of their member indices; the
overall score is a weighted RMS of the category scores.  Because an average
can hide a single bad test, the worst individual index is tracked
separately and gates whether the overall score counts as certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import DEFAULT_CONFIG, CredibilityConfig
from .errors import DomainError

NamedIndex = tuple[str, float]


def _validated(entries: Iterable, category: str) -> tuple[NamedIndex, ...]:
    out = []
    for entry in entries:
        try:
            name, value = entry
        except (TypeError, ValueError):
            raise DomainError(f"{category} entries must be (name, index) pairs, got {entry!r}")
        if not (isinstance(value, (int, float)) and 0.0 < value <= 1.0):
            raise DomainError(f"{category} index {name!r} must lie in (0, 1], got {value!r}")
        out.append((str(name), float(value)))
    return tuple(out)


@dataclass(frozen=True)
class AssessmentSet:
    """Named per-test indices, one tuple per category."""

    perf_indices: tuple[NamedIndex, ...] = ()
    time_indices: tuple[NamedIndex, ...] = ()
    freq_indices: tuple[NamedIndex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "perf_indices", _validated(self.perf_indices, "performance"))
        object.__setattr__(self, "time_indices", _validated(self.time_indices, "time"))
        object.__setattr__(self, "freq_indices", _validated(self.freq_indices, "frequency"))
        if not (self.perf_indices or self.time_indices or self.freq_indices):
            raise DomainError("an assessment set needs at least one index")


@dataclass(frozen=True)
class Verdict:
    """Aggregated outcome of one assessment run."""

    eta_bar_p: float | None
    eta_bar_t: float | None
    eta_bar_f: float | None
    eta_all: float
    eta_min: float
    min_source: str
    gate_passed: bool


def category_average(indices: Sequence[float]) -> float:
    """Root-mean-square of a non-empty vector of indices in (0, 1]."""
    values = list(indices)
    if not values:
        raise DomainError("cannot average an empty index vector")
    for value in values:
        if not (isinstance(value, (int, float)) and 0.0 < value <= 1.0):
            raise DomainError(f"indices must lie in (0, 1], got {value!r}")
    return math.sqrt(sum(v * v for v in values) / len(values))


def overall_index(
    eta_bar_p: float | None,
    eta_bar_t: float | None,
    eta_bar_f: float | None,
    config: CredibilityConfig = DEFAULT_CONFIG,
) -> float:
    """Weighted RMS of the present category averages.

    The weight mass of absent categories is redistributed proportionally
    over the present ones (equally, if the present weights are all zero),
    so the result stays a true weighted mean.
    """
    present = [
        (alpha, eta)
        for alpha, eta in zip(config.weights, (eta_bar_p, eta_bar_t, eta_bar_f))
        if eta is not None
    ]
    if not present:
        raise DomainError("no category averages present")
    for _, eta in present:
        if not (0.0 < eta <= 1.0):
            raise DomainError(f"category averages must lie in (0, 1], got {eta!r}")
    total = sum(alpha for alpha, _ in present)
    if total > 0.0:
        shares = [(alpha / total, eta) for alpha, eta in present]
    else:
        shares = [(1.0 / len(present), eta) for _, eta in present]
    return math.sqrt(sum(share * eta * eta for share, eta in shares))


def minimum_index(assessment: AssessmentSet) -> tuple[float, str]:
    """Worst individual index across all categories and its test name.

    Ties resolve to the first occurrence in input order (performance, then
    time, then frequency).
    """
    best: tuple[float, str] | None = None
    for name, value in (
        assessment.perf_indices + assessment.time_indices + assessment.freq_indices
    ):
        if best is None or value < best[0]:
            best = (value, name)
    if best is None:
        raise DomainError("an assessment set needs at least one index")
    return best


def gate(verdict: Verdict, config: CredibilityConfig = DEFAULT_CONFIG) -> bool:
    """Worst-case gate: the overall score is certified only when the
    minimum index reaches ``config.eps_min``."""
    return verdict.eta_min >= config.eps_min


def assess(assessment: AssessmentSet, config: CredibilityConfig = DEFAULT_CONFIG) -> Verdict:
    """Full aggregation of an assessment set into a :class:`Verdict`."""
    eta_bar_p = (
        category_average([v for _, v in assessment.perf_indices])
        if assessment.perf_indices
        else None
    )
    eta_bar_t = (
        category_average([v for _, v in assessment.time_indices])
        if assessment.time_indices
        else None
    )
    eta_bar_f = (
        category_average([v for _, v in assessment.freq_indices])
        if assessment.freq_indices
        else None
    )
    eta_all = overall_index(eta_bar_p, eta_bar_t, eta_bar_f, config)
    eta_min, min_source = minimum_index(assessment)
    return Verdict(
        eta_bar_p=eta_bar_p,
        eta_bar_t=eta_bar_t,
        eta_bar_f=eta_bar_f,
        eta_all=eta_all,
        eta_min=eta_min,
        min_source=min_source,
        gate_passed=eta_min >= config.eps_min,
    )
