from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

SCHEMA_VERSION = "1.0"


class KSReport(BaseModel):
    """One-sample Kolmogorov-Smirnov result"""

    model_config = ConfigDict(frozen=True)

    statistic: float = Field(ge=0.0, le=1.0)
    p_value: float = Field(ge=0.0, le=1.0)
    n: int = Field(ge=1)


class NullDistribution(BaseModel):
    """Monte Carlo null of the deviance D with its fitted scaled Beta on [0, M]"""

    samples: list[float]
    M: float = Field(gt=0)
    alpha: float = Field(gt=0)
    beta: float = Field(gt=0)
    nu: int = Field(ge=1)
    s: int = Field(ge=1)
    seed: int
    dropped_replicates: int = 0
    m_clamped: bool = False

    @model_validator(mode="after")
    def _samples_within_bound(self) -> "NullDistribution":
        if any(d < 0 or d > self.M for d in self.samples):
            raise ValueError("null samples must lie in [0, M]")
        return self


class Convention(BaseModel):
    directedness: str
    selfloops: bool
    dof_rule: str
    undirected_diagonal: str = "k_i^2/2"
    dyads: str


class TestReport(BaseModel):
    """Outcome of a likelihood-ratio test, serialized with the published key names"""

    __test__ = False

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = SCHEMA_VERSION
    command: str = "test"
    lambda_: float = Field(alias="lambda", ge=0.0, le=1.0)
    log_lambda: float = Field(le=0.0)
    D: float = Field(ge=0.0)
    p_beta: float = Field(ge=0.0, le=1.0)
    p_chi2: float = Field(ge=0.0, le=1.0)
    alpha: Optional[float] = None
    beta: Optional[float] = None
    M: Optional[float] = None
    nu: int
    s: int
    seed: int
    dropped_replicates: int = 0
    null_model: dict[str, Any]
    alt_model: dict[str, Any]
    convention: Convention
    timings_ms: dict[str, float] = Field(default_factory=dict)
    null_distribution: Optional[NullDistribution] = Field(default=None, exclude=True)

    def to_json_dict(self) -> dict[str, Any]:
        return self.model_dump(by_alias=True, exclude={"null_distribution"})


class SweepRow(BaseModel):
    """KS results of Beta fits on s null samples, summarized over repetitions.

    `median_p` is the p-value of the median statistic at the reference-set size,
    `median_p_effective` the same statistic at the two-sample effective size.
    """

    s: int = Field(ge=1)
    reps: int = Field(ge=1)
    median_statistic: float = Field(ge=0.0, le=1.0)
    median_p: float
    median_p_effective: float
    q25_p: float
    q75_p: float
    iqr_p: float


class CaseStudySummary(BaseModel):
    """Observed quantities of a case study next to the published ones"""

    schema_version: str = SCHEMA_VERSION
    case_study: str
    seed: int
    reps: int
    s: int
    observed: dict[str, Any]
    published: dict[str, Any]
