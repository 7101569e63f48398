from ghype.models.configs import QuadratureConfig, SampleBatchConfig
from ghype.models.model_spec import ModelKind, ModelSpec
from ghype.models.reports import (
    SCHEMA_VERSION,
    CaseStudySummary,
    Convention,
    KSReport,
    NullDistribution,
    SweepRow,
    TestReport,
)

__all__ = [
    "SCHEMA_VERSION",
    "CaseStudySummary",
    "Convention",
    "KSReport",
    "ModelKind",
    "ModelSpec",
    "NullDistribution",
    "QuadratureConfig",
    "SampleBatchConfig",
    "SweepRow",
    "TestReport",
]
