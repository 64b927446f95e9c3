"""Gaussian pair analysis: canonical correlations, common information,
conditional-independence realizations, and rate-distortion surfaces."""

from .errors import (
    AllocationOutOfRange,
    AsymmetricMatrix,
    DimensionMismatch,
    GwgaussError,
    InconsistentIndices,
    InfeasibleRegion,
    MissingReconstruction,
    NonpositiveDistortion,
    NotPositiveDefinite,
    OutsideDW,
    QWNotDiagonal,
    QWOutOfFamily,
    SingularFactor,
    SingularValueOutOfRange,
    TooFewSamples,
)
from .gaussmodel import (
    CovMatrix,
    GaussianTriple,
    JointGaussianPair,
    gaussian_entropy,
    gaussian_mi,
    mi_canonical,
    nats_to,
    pair_from_csv,
    pair_from_dict,
    pair_from_json,
    pair_to_csv,
    pair_to_dict,
    pair_to_json,
    validate_covariance,
)
from .cvf import (
    CanonicalForm,
    IndexSextuple,
    Thresholds,
    apply_transform,
    canonical_correlations_oracle,
    canonical_cross_pattern,
    decompose,
    pattern_residual,
)
from .wyner import (
    CommonInfoResult,
    HuaInequalityCheck,
    QWParameter,
    as_state_covariance,
    assert_in_state_family,
    check_hua_identity,
    check_hua_inequality,
    common_information,
    in_state_family,
    mi_given_state,
    sample_state_matrix,
)
from .realize import (
    CIRealization,
    OptimalState,
    SampleBlock,
    TestChannel,
    encoder_split,
    family_realization,
    optimal_state,
    optimal_triple_cov,
    sample,
    sqrt_psd,
    state_triple,
    test_channel,
)
from .rdf import (
    JointRdfResult,
    RdfResult,
    conditional_rdf,
    dw_bound,
    gray_lower_bound,
    in_dw,
    joint_rdf,
    marginal_rdf,
    sum_rate_identity_check,
)
from .graywyner import (
    DWRegion,
    RateTriple,
    SweepPoint,
    lossy_common_information,
    pangloss_triple,
    region_sweep,
)
from .mc_oracle import ValidationReport, validate_distortion, validate_realization

__version__ = "0.1.0"

__all__ = [
    "AllocationOutOfRange",
    "AsymmetricMatrix",
    "CIRealization",
    "CanonicalForm",
    "CommonInfoResult",
    "CovMatrix",
    "DWRegion",
    "DimensionMismatch",
    "GaussianTriple",
    "GwgaussError",
    "HuaInequalityCheck",
    "InconsistentIndices",
    "IndexSextuple",
    "InfeasibleRegion",
    "JointGaussianPair",
    "JointRdfResult",
    "MissingReconstruction",
    "NonpositiveDistortion",
    "NotPositiveDefinite",
    "OptimalState",
    "OutsideDW",
    "QWNotDiagonal",
    "QWOutOfFamily",
    "QWParameter",
    "RateTriple",
    "RdfResult",
    "SampleBlock",
    "SingularFactor",
    "SingularValueOutOfRange",
    "SweepPoint",
    "TestChannel",
    "Thresholds",
    "TooFewSamples",
    "ValidationReport",
    "apply_transform",
    "as_state_covariance",
    "assert_in_state_family",
    "canonical_correlations_oracle",
    "canonical_cross_pattern",
    "check_hua_identity",
    "check_hua_inequality",
    "common_information",
    "conditional_rdf",
    "decompose",
    "dw_bound",
    "encoder_split",
    "family_realization",
    "gaussian_entropy",
    "gaussian_mi",
    "gray_lower_bound",
    "in_dw",
    "in_state_family",
    "joint_rdf",
    "lossy_common_information",
    "marginal_rdf",
    "mi_canonical",
    "mi_given_state",
    "nats_to",
    "optimal_state",
    "optimal_triple_cov",
    "pair_from_csv",
    "pair_from_dict",
    "pair_from_json",
    "pair_to_csv",
    "pair_to_dict",
    "pair_to_json",
    "pangloss_triple",
    "pattern_residual",
    "region_sweep",
    "sample",
    "sample_state_matrix",
    "sqrt_psd",
    "state_triple",
    "sum_rate_identity_check",
    "test_channel",
    "validate_covariance",
    "validate_distortion",
    "validate_realization",
]
