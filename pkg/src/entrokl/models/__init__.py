"""Pydantic models and schemas.

Public API:
- Base types: DensityFamily, FunctionalKind, LocalKind, NnMethod, SupportKind
- Data carriers: SampleSet, NnDistances, EntropyEstimate
- Density documents: GaussianSpec, UniformBoxSpec, ExponentialSpec, DensitySpec
- Reports: every JSON report emitted by the services
"""

from entrokl.models.base import DensityFamily, FunctionalKind, LocalKind, NnMethod, SupportKind
from entrokl.models.density import (
    DensitySpec,
    ExponentialSpec,
    GaussianSpec,
    UniformBoxSpec,
    density_spec_adapter,
)
from entrokl.models.estimate import EntropyEstimate
from entrokl.models.reports import (
    DIVERGENT,
    BoundednessReport,
    CdfAgreementReport,
    CellFailure,
    ConditionAReport,
    ConditionalLawReport,
    ConvergenceReport,
    ConvergenceRow,
    EnvelopeReport,
    EstimateSummary,
    FunctionalEstimate,
    IdentityCheck,
    LocalFunctionalValue,
    LogIntegrabilityReport,
    LogMomentIdentityReport,
    LogMomentsReport,
    MinorizationProbe,
    MinorizationReport,
    RepRecord,
    Report,
    VarianceDecompositionReport,
)
from entrokl.models.sample import NnDistances, SampleSet

__all__ = [
    "DIVERGENT",
    "BoundednessReport",
    "CdfAgreementReport",
    "CellFailure",
    "ConditionAReport",
    "ConditionalLawReport",
    "ConvergenceReport",
    "ConvergenceRow",
    "DensityFamily",
    "DensitySpec",
    "EntropyEstimate",
    "EnvelopeReport",
    "EstimateSummary",
    "ExponentialSpec",
    "FunctionalEstimate",
    "FunctionalKind",
    "GaussianSpec",
    "IdentityCheck",
    "LocalFunctionalValue",
    "LocalKind",
    "LogIntegrabilityReport",
    "LogMomentIdentityReport",
    "LogMomentsReport",
    "MinorizationProbe",
    "MinorizationReport",
    "NnDistances",
    "NnMethod",
    "RepRecord",
    "Report",
    "SampleSet",
    "SupportKind",
    "UniformBoxSpec",
    "VarianceDecompositionReport",
    "density_spec_adapter",
]
