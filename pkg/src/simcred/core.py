"""Error-to-index normalization and the shared assessment configuration.

Every assessment in this package reduces to the same question: how large is
a raw error ``e`` compared to its tolerance ``eps``?  The :func:`normalize`
map answers it with a dimensionless credibility index in ``(0, 1]`` that is
pinned so ``e == eps`` scores exactly the configured passing mark.  Being a
pure ratio of ``e`` to ``eps``, the index is invariant under common unit
rescaling, which is what makes indices from unrelated physical quantities
comparable and combinable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DomainError

#: Tolerance on the category-weight sum before a config is rejected.
WEIGHT_SUM_TOL = 1e-12

#: Named weight presets accepted by config files.
WEIGHT_PRESETS = {
    "uniform": (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
    "dynamics-weighted": (0.3, 0.3, 0.4),
}


def scale_factor(eta_pass: float) -> float:
    """Scale factor that makes ``normalize(eps, eps)`` equal ``eta_pass``.

    Equal to ``eta_pass / sqrt(1 - eta_pass**2)``; defined for
    ``0 < eta_pass < 1``.
    """
    if not (isinstance(eta_pass, (int, float)) and 0.0 < eta_pass < 1.0):
        raise DomainError(f"eta_pass must lie strictly in (0, 1), got {eta_pass!r}")
    return eta_pass / math.sqrt(1.0 - eta_pass * eta_pass)


@dataclass(frozen=True)
class CredibilityConfig:
    """Settings shared by every index computation.

    eta_pass
        Index value awarded when an error sits exactly on its tolerance.
    k_p
        Fraction of the reference magnitude used when a tolerance is derived
        dynamically (from the experimental value or curve range).
    alpha_p, alpha_t, alpha_f
        Category weights (performance / time / frequency) for the overall
        index.  They must sum to 1 within :data:`WEIGHT_SUM_TOL` and are
        renormalized to an exact unit sum on construction.
    eps_min
        Worst-case gate: the overall index is certified only when the
        minimum individual index reaches this level.
    eps_co
        Coherence level below which frequency-domain data is rejected as
        unreliable.
    """

    eta_pass: float = 0.6
    k_p: float = 0.05
    alpha_p: float = 1.0 / 3.0
    alpha_t: float = 1.0 / 3.0
    alpha_f: float = 1.0 / 3.0
    eps_min: float = 0.9
    eps_co: float = 0.6

    def __post_init__(self) -> None:
        if not (0.0 < self.eta_pass < 1.0):
            raise DomainError(f"eta_pass must lie in (0, 1), got {self.eta_pass!r}")
        if not (isinstance(self.k_p, (int, float)) and self.k_p > 0.0 and math.isfinite(self.k_p)):
            raise DomainError(f"k_p must be a positive finite number, got {self.k_p!r}")
        if not (0.0 < self.eps_min <= 1.0):
            raise DomainError(f"eps_min must lie in (0, 1], got {self.eps_min!r}")
        if not (0.0 < self.eps_co <= 1.0):
            raise DomainError(f"eps_co must lie in (0, 1], got {self.eps_co!r}")
        for label, value in (("alpha_p", self.alpha_p), ("alpha_t", self.alpha_t), ("alpha_f", self.alpha_f)):
            if not (isinstance(value, (int, float)) and 0.0 <= value <= 1.0):
                raise DomainError(f"{label} must lie in [0, 1], got {value!r}")
        total = self.alpha_p + self.alpha_t + self.alpha_f
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError(
                f"category weights must sum to 1 (within {WEIGHT_SUM_TOL:g}), got {total!r}"
            )
        if total != 1.0:
            p = self.alpha_p / total
            t = self.alpha_t / total
            object.__setattr__(self, "alpha_p", p)
            object.__setattr__(self, "alpha_t", t)
            object.__setattr__(self, "alpha_f", 1.0 - p - t)

    @property
    def k_e(self) -> float:
        """Normalization scale factor, always recomputed from ``eta_pass``."""
        return scale_factor(self.eta_pass)

    @property
    def weights(self) -> tuple[float, float, float]:
        return (self.alpha_p, self.alpha_t, self.alpha_f)

    @classmethod
    def dynamics_weighted(cls, **kwargs) -> "CredibilityConfig":
        """Preset emphasizing frequency-domain agreement (weights 0.3/0.3/0.4)."""
        p, t, f = WEIGHT_PRESETS["dynamics-weighted"]
        return cls(alpha_p=p, alpha_t=t, alpha_f=f, **kwargs)


DEFAULT_CONFIG = CredibilityConfig()


def normalize(e: float, eps: float, config: CredibilityConfig = DEFAULT_CONFIG) -> float:
    """Map an error ``e >= 0`` with tolerance ``eps > 0`` onto ``(0, 1]``.

    Returns ``k_e*eps / sqrt((k_e*eps)**2 + e**2)``: 1 for a perfect match,
    exactly ``config.eta_pass`` at ``e == eps``, and decaying toward 0 as the
    error grows.  Strictly decreasing in ``e``, strictly increasing in
    ``eps``, and invariant under a common rescaling of both.
    """
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and eps > 0.0):
        raise DomainError(f"error threshold must be a positive finite number, got {eps!r}")
    if not (isinstance(e, (int, float)) and math.isfinite(e) and e >= 0.0):
        raise DomainError(f"error must be a non-negative finite number, got {e!r}")
    anchor = config.k_e * eps
    return anchor / math.hypot(anchor, e)


_CONFIG_KEYS = {"eta_pass", "k_p", "weights", "eps_min", "eps_co"}
_WEIGHT_KEYS = {"p", "t", "f"}


def config_from_dict(doc: dict, base: CredibilityConfig | None = None) -> CredibilityConfig:
    """Build a config from a JSON-style mapping, on top of ``base``.

    Recognized keys: ``eta_pass``, ``k_p``, ``weights`` (either a mapping
    ``{"p": .., "t": .., "f": ..}`` or a preset name), ``eps_min``,
    ``eps_co``.  All keys are optional; unknown keys are rejected.
    """
    if not isinstance(doc, dict):
        raise DomainError(f"config document must be a JSON object, got {type(doc).__name__}")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    base = base if base is not None else DEFAULT_CONFIG
    fields: dict = {}
    for key in ("eta_pass", "k_p", "eps_min", "eps_co"):
        if key in doc:
            fields[key] = doc[key]
    if "weights" in doc:
        w = doc["weights"]
        if isinstance(w, str):
            if w not in WEIGHT_PRESETS:
                raise DomainError(f"unknown weight preset {w!r}; choose from {sorted(WEIGHT_PRESETS)}")
            p, t, f = WEIGHT_PRESETS[w]
        elif isinstance(w, dict):
            if set(w) != _WEIGHT_KEYS:
                raise DomainError(f"weights must carry exactly the keys p, t, f; got {sorted(w)}")
            p, t, f = w["p"], w["t"], w["f"]
        else:
            raise DomainError("weights must be a mapping {p, t, f} or a preset name")
        fields["alpha_p"], fields["alpha_t"], fields["alpha_f"] = p, t, f
    try:
        return replace(base, **fields)
    except TypeError as exc:  # non-numeric junk in a numeric field
        raise DomainError(f"invalid config value: {exc}") from exc


def load_config(path: str | Path, base: CredibilityConfig | None = None) -> CredibilityConfig:
    """Load a :class:`CredibilityConfig` from a JSON document."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(doc, base)
