"""Biphoton ququart toolkit.

Models four-dimensional quantum states carried by the joint polarization
of a frequency-nondegenerate photon pair: preparation through
wavelength-dependent waveplate optics, 16-setting coincidence tomography
with Poisson noise, and density-matrix reconstruction by linear
inversion and maximum-likelihood fitting.

Basis order everywhere: index 0 |HH>, 1 |HV>, 2 |VH>, 3 |VV>, with the
longer-wavelength (signal) photon in the first slot.
"""

from .validation import ValidationError
from .states import (
    BASIS_LABELS,
    DIM,
    SchmidtDecomposition,
    StateComparison,
    canonical_phase,
    compare_states,
    concurrence,
    concurrence_pure,
    density_from_pure,
    entropy,
    fidelity,
    purity,
    schmidt_decompose,
    trace_distance,
)
from .optics import (
    CalibrationError,
    WaveplateSpec,
    calibration_probes,
    jones_from_stokes_probes,
    jones_to_stokes,
    polarizer_projector,
    ququart_unitary,
    retarder_jones,
    stokes_after_element,
    stokes_to_jones,
    waveplate_jones,
    waveplate_retardance,
)
from .prepare import (
    DEFAULT_SOURCE,
    DoubleCrystalConfig,
    MachZehnderPlan,
    NoEmissionError,
    SpdcSource,
    apply_waveplate,
    double_crystal_state,
    mz_plan_to_state,
    partially_mixed_state,
    prepare_from_config,
    pure_state_mixture,
    schmidt_scheme_state,
    single_crystal_state,
    state_to_mz_plan,
)
from .tomography import (
    AnalysisSetting,
    BootstrapError,
    BootstrapErrors,
    CompletenessError,
    ConvergenceError,
    CountRecord,
    LinearInversionTomography,
    MaximumLikelihoodTomography,
    ProjectorSet,
    analysis_state,
    bootstrap_errors,
    build_projectors,
    estimate_total,
    expected_counts,
    simulate_counts,
)
from .datasets import (
    DATASET_NAMES,
    ReferenceDataset,
    ReportedMetrics,
    dataset_checksum,
    export_dataset,
    load_dataset,
    table1_settings,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisSetting",
    "BASIS_LABELS",
    "BootstrapError",
    "BootstrapErrors",
    "CalibrationError",
    "CompletenessError",
    "ConvergenceError",
    "CountRecord",
    "DATASET_NAMES",
    "DEFAULT_SOURCE",
    "DIM",
    "DoubleCrystalConfig",
    "LinearInversionTomography",
    "MachZehnderPlan",
    "MaximumLikelihoodTomography",
    "NoEmissionError",
    "ProjectorSet",
    "ReferenceDataset",
    "ReportedMetrics",
    "SchmidtDecomposition",
    "SpdcSource",
    "StateComparison",
    "ValidationError",
    "WaveplateSpec",
    "analysis_state",
    "apply_waveplate",
    "bootstrap_errors",
    "build_projectors",
    "calibration_probes",
    "canonical_phase",
    "compare_states",
    "concurrence",
    "concurrence_pure",
    "dataset_checksum",
    "density_from_pure",
    "double_crystal_state",
    "entropy",
    "estimate_total",
    "expected_counts",
    "export_dataset",
    "fidelity",
    "jones_from_stokes_probes",
    "jones_to_stokes",
    "load_dataset",
    "mz_plan_to_state",
    "partially_mixed_state",
    "polarizer_projector",
    "prepare_from_config",
    "pure_state_mixture",
    "purity",
    "ququart_unitary",
    "retarder_jones",
    "schmidt_decompose",
    "schmidt_scheme_state",
    "simulate_counts",
    "single_crystal_state",
    "state_to_mz_plan",
    "stokes_after_element",
    "stokes_to_jones",
    "table1_settings",
    "trace_distance",
    "waveplate_jones",
    "waveplate_retardance",
]
