from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ghype.config import DofRule, Settings
from ghype.models.model_spec import ModelKind


class QuadratureConfig(BaseModel):
    """Tolerances for the adaptive quadrature behind the Wallenius likelihood"""

    model_config = ConfigDict(frozen=True)

    relative_tolerance: float = Field(default=1e-10, gt=0)
    absolute_tolerance: float = Field(default=1e-12, gt=0)
    max_subdivisions: int = Field(default=2048, ge=1)

    @classmethod
    def from_settings(cls, settings: Settings) -> "QuadratureConfig":
        return cls(
            relative_tolerance=settings.quad_rel_tol,
            absolute_tolerance=settings.quad_abs_tol,
            max_subdivisions=settings.quad_max_subdivisions,
        )


class SampleBatchConfig(BaseModel):
    """Replicate count, master seed and advisory parallelism for a sample batch"""

    model_config = ConfigDict(frozen=True)

    count: int = Field(ge=1)
    master_seed: int = Field(ge=0, lt=2**64)
    worker_hint: int = Field(default=1, ge=1)


Command = Literal["test", "gof", "nulldist", "validate", "casestudy", "sample", "describe"]
OutputFormat = Literal["json", "csv"]

GRAPH_COMMANDS = {"test", "gof", "nulldist", "validate", "describe"}
TEST_COMMANDS = {"test", "gof", "nulldist", "validate"}


class RunConfig(BaseModel):
    """Validated options of one command-line invocation"""

    model_config = ConfigDict(frozen=True)

    command: Command
    graph_path: Optional[Path] = None
    directed: bool = False
    null_kind: ModelKind = "regular"
    alt_kind: ModelKind = "configuration"
    partition_path: Optional[Path] = None
    model_path: Optional[Path] = None
    samples: int = 1000
    seed: int = Field(ge=0, lt=2**64)
    reps: int = Field(default=50, ge=1)
    sizes: list[int] = Field(default_factory=lambda: [250, 500, 1000, 2000])
    reference_size: int = Field(default=20_000, ge=30)
    count: int = Field(default=1, ge=1)
    edges: Optional[int] = Field(default=None, ge=0)
    case_study: Optional[str] = None
    output_format: OutputFormat = "json"
    output_path: Optional[Path] = None
    samples_csv: Optional[Path] = None
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    dof_rule: DofRule = "difference"
    workers: int = Field(default=1, ge=1)
    bins: int = Field(default=40, ge=1)
    timings: bool = False

    @model_validator(mode="after")
    def _required_per_command(self) -> "RunConfig":
        if self.command in GRAPH_COMMANDS and self.graph_path is None:
            raise ValueError(f"'{self.command}' needs --graph")
        if self.command in TEST_COMMANDS and self.samples < 30:
            raise ValueError(f"--samples must be at least 30, got {self.samples}")
        if self.command == "nulldist" and self.output_path is None:
            raise ValueError("'nulldist' needs --out for the histogram CSV and its sidecar")
        if self.command == "validate" and (not self.sizes or min(self.sizes) < 2):
            raise ValueError("'validate' needs --sizes of at least 2 samples each")
        if self.command == "casestudy" and not self.case_study:
            raise ValueError("'casestudy' needs a case-study name")
        if self.command == "sample":
            if self.output_path is None:
                raise ValueError("'sample' needs --out DIRECTORY")
            if self.model_path is None and self.graph_path is None:
                raise ValueError("'sample' needs --graph or --model")
            if self.model_path is not None and self.edges is None:
                raise ValueError("'sample' from --model needs --edges")
        return self
