"""
Data models for the D-SIC simulator
"""

from .data_models import (
    BasisKind,
    SourceKind,
    PilotDistribution,
    ExperimentKind,
    ComplexSequence,
    SequenceStats,
    BasisConfig,
    TransformMatrix,
    MeasurementMatrix,
    GramSpectrum,
    PilotCandidate,
    RappParams,
    ChannelModel,
    LinkBudget,
    WeightVector,
    RsiReport,
    OracleBundle,
    ExperimentConfig,
    ResultTable,
    RunManifest
)

__all__ = [
    "BasisKind",
    "SourceKind",
    "PilotDistribution",
    "ExperimentKind",
    "ComplexSequence",
    "SequenceStats",
    "BasisConfig",
    "TransformMatrix",
    "MeasurementMatrix",
    "GramSpectrum",
    "PilotCandidate",
    "RappParams",
    "ChannelModel",
    "LinkBudget",
    "WeightVector",
    "RsiReport",
    "OracleBundle",
    "ExperimentConfig",
    "ResultTable",
    "RunManifest"
]
