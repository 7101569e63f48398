from typing import Literal, Optional

import dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

DofRule = Literal["difference", "saturated"]


class Settings(BaseSettings):
    """Runtime defaults, overridable through GHYP_* environment variables or a .env file"""

    model_config = SettingsConfigDict(env_prefix="GHYP_", env_file=".env", extra="ignore")

    threads: int = Field(default=1, ge=1)
    samples: int = Field(default=1000, ge=30)
    quad_rel_tol: float = Field(default=1e-10, gt=0)
    quad_abs_tol: float = Field(default=1e-12, gt=0)
    quad_max_subdivisions: int = Field(default=2048, ge=1)
    log_level: str = "WARNING"
    # unset: difference for `test`, saturated for `gof`
    dof_rule: Optional[DofRule] = None


def get_settings() -> Settings:
    """Load .env into the process environment, then read settings from it"""
    dotenv.load_dotenv(override=False)
    return Settings()


def default_dof_rule(command: str) -> DofRule:
    """chi2 degrees-of-freedom rule used when neither --dof-rule nor GHYP_DOF_RULE is set"""
    return "saturated" if command == "gof" else "difference"
