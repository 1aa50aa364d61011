"""Run manifests: which tests to run, on which files, with which settings.

A manifest is a JSON document listing test descriptors.  Loading is strict
and eager: every referenced data file is read, parsed and validated up
front, so a bad input fails fast with a file-level diagnostic instead of
halfway through an assessment.  File digests are collected for report
provenance.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .core import CredibilityConfig, config_from_dict
from .errors import CsvError, DomainError, ManifestError
from .performance import PerformanceSample, read_samples_csv
from .spectral import FrequencyResponse, SweepRecord, read_bode_csv, read_sweep_csv
from .timedomain import TimeSeries, read_series_csv

KINDS = ("performance", "time", "frequency")


@dataclass(frozen=True)
class PerformanceTest:
    """One CSV of performance samples; every row is assessed on its own."""

    name: str
    file: Path
    samples: tuple[PerformanceSample, ...]

    kind = "performance"


@dataclass(frozen=True)
class TimeTest:
    name: str
    experiment_path: Path
    simulation_path: Path
    experiment: TimeSeries
    simulation: TimeSeries
    n_t: int | None = None
    smooth_window: int | None = None
    k_p: float | None = None

    kind = "time"


@dataclass(frozen=True)
class FrequencyTest:
    """Sweep records (``data == "sweep"``) or externally produced Bode
    curves (``data == "bode"``)."""

    name: str
    experiment_path: Path
    simulation_path: Path
    data: str
    exp_sweep: SweepRecord | None = None
    sim_sweep: SweepRecord | None = None
    exp_bode: FrequencyResponse | None = None
    sim_bode: FrequencyResponse | None = None
    band: tuple[float, float] | None = None
    segment_len: int | None = None
    overlap: float | None = None
    use_weighting: bool = True
    points_per_decade: int | None = None
    k_p: float | None = None

    kind = "frequency"


TestDescriptor = PerformanceTest | TimeTest | FrequencyTest


@dataclass(frozen=True)
class RunManifest:
    path: Path
    tests: tuple[TestDescriptor, ...]
    config: CredibilityConfig
    digests: dict  # relative path -> sha256, for provenance


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _resolve(base: Path, name: object, test_name: str, key: str) -> Path:
    if not isinstance(name, str) or not name:
        raise ManifestError(f"test {test_name!r}: {key} must be a non-empty path string")
    path = (base / name).resolve() if not Path(name).is_absolute() else Path(name)
    if not path.is_file():
        raise ManifestError(f"test {test_name!r}: file not found: {path}")
    return path


def _optional(doc: dict, key: str, kinds, test_name: str, check=None, expect=""):
    value = doc.get(key)
    if value is None:
        return None
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise ManifestError(f"test {test_name!r}: {key} has invalid type {type(value).__name__}")
    if check is not None and not check(value):
        raise ManifestError(f"test {test_name!r}: {key} must be {expect}, got {value!r}")
    return value


def default_segment_len(n_samples: int) -> int:
    """Largest power of two not exceeding one eighth of the record, so the
    default 50% overlap yields a healthy number of averaged segments."""
    target = max(2, n_samples // 8)
    return max(2, 1 << (target.bit_length() - 1))


def load_manifest(
    path: str | Path, base_config: CredibilityConfig | None = None
) -> RunManifest:
    """Load and fully validate a manifest.

    ``base_config`` (e.g. from a config file or the environment) is applied
    first; the manifest's own ``config`` overrides sit on top of it.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError(f"manifest {path} must be a JSON object")
    unknown = set(doc) - {"config", "tests"}
    if unknown:
        raise ManifestError(f"manifest {path}: unknown top-level keys {sorted(unknown)}")
    try:
        config = config_from_dict(doc.get("config", {}), base_config)
    except DomainError as exc:
        raise ManifestError(f"manifest {path}: {exc}") from exc
    raw_tests = doc.get("tests")
    if not isinstance(raw_tests, list) or not raw_tests:
        raise ManifestError(f"manifest {path}: 'tests' must be a non-empty list")

    base = path.parent
    digests: dict[str, str] = {path.name: _sha256(path)}
    tests: list[TestDescriptor] = []
    seen: set[str] = set()
    for position, entry in enumerate(raw_tests):
        if not isinstance(entry, dict):
            raise ManifestError(f"manifest {path}: tests[{position}] must be an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise ManifestError(f"manifest {path}: tests[{position}] needs a non-empty name")
        if name in seen:
            raise ManifestError(f"manifest {path}: duplicate test name {name!r}")
        seen.add(name)
        kind = entry.get("kind")
        if kind not in KINDS:
            raise ManifestError(
                f"manifest {path}: test {name!r} has unknown kind {kind!r}; expected one of {KINDS}"
            )
        try:
            tests.append(_load_test(kind, name, entry, base, digests))
        except (CsvError, DomainError) as exc:
            raise ManifestError(f"manifest {path}: test {name!r}: {exc}") from exc
    return RunManifest(path=path, tests=tuple(tests), config=config, digests=digests)


def _digest(digests: dict, base: Path, path: Path) -> None:
    try:
        key = str(path.relative_to(base.resolve()))
    except ValueError:
        key = str(path)
    digests[key] = _sha256(path)


def _load_test(kind: str, name: str, entry: dict, base: Path, digests: dict) -> TestDescriptor:
    known_keys = {
        "performance": {"kind", "name", "file"},
        "time": {"kind", "name", "experiment", "simulation", "n_t", "smooth_window", "k_p"},
        "frequency": {
            "kind", "name", "experiment", "simulation", "data", "band", "segment_len",
            "overlap", "use_weighting", "points_per_decade", "k_p",
        },
    }[kind]
    unknown = set(entry) - known_keys
    if unknown:
        raise ManifestError(f"unknown keys {sorted(unknown)} for a {kind} test")

    if kind == "performance":
        file = _resolve(base, entry.get("file"), name, "file")
        samples = tuple(read_samples_csv(file))
        _digest(digests, base, file)
        return PerformanceTest(name=name, file=file, samples=samples)

    exp_path = _resolve(base, entry.get("experiment"), name, "experiment")
    sim_path = _resolve(base, entry.get("simulation"), name, "simulation")
    _digest(digests, base, exp_path)
    _digest(digests, base, sim_path)

    if kind == "time":
        n_t = _optional(entry, "n_t", int, name, lambda v: v >= 2, "an integer >= 2")
        smooth_window = _optional(
            entry, "smooth_window", int, name,
            lambda v: v >= 1 and v % 2 == 1, "an odd integer >= 1",
        )
        k_p = _optional(entry, "k_p", (int, float), name, lambda v: v > 0, "> 0")
        return TimeTest(
            name=name,
            experiment_path=exp_path,
            simulation_path=sim_path,
            experiment=read_series_csv(exp_path),
            simulation=read_series_csv(sim_path),
            n_t=n_t,
            smooth_window=smooth_window,
            k_p=k_p,
        )

    data = entry.get("data", "sweep")
    if data not in ("sweep", "bode"):
        raise ManifestError(f"data must be 'sweep' or 'bode', got {data!r}")
    band = entry.get("band")
    if band is not None:
        if (
            not isinstance(band, list)
            or len(band) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in band)
        ):
            raise ManifestError(f"band must be a [f_a, f_b] pair of numbers, got {band!r}")
        band = (float(band[0]), float(band[1]))
        if not 0.0 < band[0] < band[1]:
            raise ManifestError(f"band must satisfy 0 < f_a < f_b, got {band!r}")
    use_weighting = entry.get("use_weighting", True)
    if not isinstance(use_weighting, bool):
        raise ManifestError(f"use_weighting must be a boolean, got {use_weighting!r}")
    fields = dict(
        name=name,
        experiment_path=exp_path,
        simulation_path=sim_path,
        data=data,
        band=band,
        segment_len=_optional(entry, "segment_len", int, name, lambda v: v >= 2, ">= 2"),
        overlap=_optional(
            entry, "overlap", (int, float), name, lambda v: 0.0 <= v < 1.0, "in [0, 1)"
        ),
        use_weighting=use_weighting,
        points_per_decade=_optional(
            entry, "points_per_decade", int, name, lambda v: v >= 1, ">= 1"
        ),
        k_p=_optional(entry, "k_p", (int, float), name, lambda v: v > 0, "> 0"),
    )
    if data == "sweep":
        return FrequencyTest(
            exp_sweep=read_sweep_csv(exp_path), sim_sweep=read_sweep_csv(sim_path), **fields
        )
    return FrequencyTest(
        exp_bode=read_bode_csv(exp_path), sim_bode=read_bode_csv(sim_path), **fields
    )
