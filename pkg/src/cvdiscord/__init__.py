"""Gaussian quantum discord and correlation measures for two-mode states.

Computes quantum mutual information, classical correlations, Gaussian
discord and the joint-quadrature inseparability criterion from two-mode
covariance matrices; reconstructs those matrices from homodyne variance
data; and models attenuation, spectrum and spatial-subchannel
experiments.
"""

from .channels import (
    Additivity,
    AdditivityVerdict,
    AttenuationSweep,
    MATCHED_PAIRS,
    PAIR_LABELS,
    SpectrumRow,
    SpectrumSweep,
    SubchannelSet,
    SWEEP_COLUMNS,
    attenuate_symmetric,
    attenuation_sweep_rows,
    build_subchannels,
    classify_additivity,
    render_sweep_csv,
    render_sweep_json,
    run_attenuation_sweep,
    run_spectrum_sweep,
    spectrum_sweep_rows,
)
from .correlations import (
    CorrelationReport,
    DiscordDirection,
    EMinBranch,
    GaussianMeasurement,
    brute_force_e_min,
    classical_correlations,
    conditional_determinant,
    correlation_report,
    discord,
    e_min,
    inseparability,
    mutual_information,
)
from .covariance import (
    StandardForm,
    SymplecticData,
    TwoModeCovariance,
    UnitConvention,
    convert_units,
    covariance_from_json,
    covariance_to_json,
    entropy_h,
    random_standard_form,
    standard_form,
    symplectic_data,
    symplectic_eigenvalues,
)
from .errors import (
    AsymmetricSingleModeNoiseError,
    ComplexEigenvalueError,
    CVDiscordError,
    EntropyDomainError,
    EtaOutOfRangeError,
    GridTooCoarseError,
    InsufficientScanRangeError,
    NonPositiveDiagonalError,
    NonSymmetricError,
    NotLocallyReducibleError,
    OverlapOutOfRangeError,
    UnknownPairError,
    UnphysicalReconstructionError,
    UnphysicalStateError,
)
from .homodyne import (
    RECORD_COLUMNS,
    ScanKind,
    ScanTrace,
    VarianceRecord,
    extract_standard_form,
    read_variance_records,
    render_scan_trace,
    render_variance_records,
    scan_minimum,
    simulate_dual_homodyne,
)

__version__ = "0.1.0"
