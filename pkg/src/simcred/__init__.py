"""simcred: quantitative credibility assessment of simulations.

Paired experiment/simulation results (scalar parameters, response curves,
sweep-frequency records) are scored with normalized credibility indices in
(0, 1] that share one passing mark, then combined into category averages,
a weighted overall index and a worst-case gate.
"""

__version__ = "0.1.0"

from .aggregate import (
    AssessmentSet,
    Verdict,
    assess,
    category_average,
    gate,
    minimum_index,
    overall_index,
)
from .core import (
    DEFAULT_CONFIG,
    CredibilityConfig,
    config_from_dict,
    load_config,
    normalize,
    scale_factor,
)
from .errors import (
    AlignmentError,
    CsvError,
    DegenerateDataError,
    DomainError,
    EstimationError,
    ManifestError,
    SimcredError,
)
from .manifest import (
    FrequencyTest,
    PerformanceTest,
    RunManifest,
    TimeTest,
    load_manifest,
)
from .performance import (
    PerformanceSample,
    performance_error,
    performance_index,
    performance_threshold,
    read_samples_csv,
    summary_sample,
    write_samples_csv,
)
from .report import (
    AssessmentReport,
    TestRecord,
    emit_report,
    render_markdown,
    run_assessment,
)
from .spectral import (
    CoherenceCheck,
    FrequencyResponse,
    SpectralEstimate,
    SweepRecord,
    bode_errors,
    bode_thresholds,
    check_coherence_criterion,
    coherence,
    coherence_weight,
    comparison_grid,
    estimate_frf,
    estimate_spectra,
    frequency_index,
    frequency_response,
    read_bode_csv,
    read_sweep_csv,
    write_bode_csv,
    write_sweep_csv,
)
from .synthgen import (
    NoiseSpec,
    SecondOrderPlant,
    analytic_bode,
    corrupt,
    graded_bode,
    log_sweep,
    simulate_response,
    step_series,
    sweep_response_record,
    write_demo_dataset,
)
from .timedomain import (
    AlignedPair,
    TimeSeries,
    align,
    read_series_csv,
    smooth,
    time_domain_error,
    time_domain_index,
    time_domain_threshold,
    write_series_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
