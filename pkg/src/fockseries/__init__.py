"""Photon statistics and beam-splitter entanglement of photon-added nonlinear
coherent states, with certified adaptive truncation of the Fock series."""

from ._version import __version__
from .entangle import (
    BeamSplitterSetting,
    EntanglementResult,
    JointAmplitudes,
    linear_entropy,
    reduced_purity,
    split,
)
from .errors import (
    DegenerateAmplitude,
    DimensionTooLarge,
    FockSeriesError,
    HardCapExceeded,
    InvalidParameter,
    InvalidTheta,
    UnnormalizedInput,
    VacuumUndefined,
)
from .oracle import PrecisionConfig, oracle_entropy, oracle_statistics, write_fixtures
from .series import (
    DEFAULT_HARD_CAP,
    DEFAULT_REL_TOL,
    AdaptiveTruncation,
    FixedTruncation,
    PhotonStatistics,
    TruncatedSeries,
    TruncationPolicy,
    log_weight,
    normalization_log,
    photon_distribution,
    photon_statistics,
    truncate,
    weight_ratio,
)
from .states import NonlinearityModel, StateSpec, penson_solomon_state
from .sweep import (
    OBSERVABLES,
    PRESETS,
    SweepRequest,
    emit_plot_script,
    parse_policy,
    run_preset,
    run_sweep,
)

__all__ = [
    "__version__",
    "AdaptiveTruncation",
    "BeamSplitterSetting",
    "DEFAULT_HARD_CAP",
    "DEFAULT_REL_TOL",
    "DegenerateAmplitude",
    "DimensionTooLarge",
    "EntanglementResult",
    "FixedTruncation",
    "FockSeriesError",
    "HardCapExceeded",
    "InvalidParameter",
    "InvalidTheta",
    "JointAmplitudes",
    "NonlinearityModel",
    "OBSERVABLES",
    "PRESETS",
    "PhotonStatistics",
    "PrecisionConfig",
    "StateSpec",
    "SweepRequest",
    "TruncatedSeries",
    "TruncationPolicy",
    "UnnormalizedInput",
    "VacuumUndefined",
    "emit_plot_script",
    "linear_entropy",
    "log_weight",
    "normalization_log",
    "oracle_entropy",
    "oracle_statistics",
    "parse_policy",
    "penson_solomon_state",
    "photon_distribution",
    "photon_statistics",
    "reduced_purity",
    "run_preset",
    "run_sweep",
    "split",
    "truncate",
    "weight_ratio",
    "write_fixtures",
]
