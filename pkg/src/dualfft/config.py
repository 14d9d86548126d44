from __future__ import annotations
import os
from functools import lru_cache
from typing import Any, Dict

import yaml
from pydantic import BaseModel, ConfigDict, Field

CONFIG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "configs")


def _read_yaml(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


class CliDefaults(BaseModel):
    model_config = ConfigDict(frozen=True)

    strategy: str = "dual"
    precision: str = "fp32"
    metric: str = "roundtrip"
    trials: int = Field(100, ge=1)
    seed: int = 42
    format: str = "human"
    workers: int = Field(1, ge=1)


class TwiddleDefaults(BaseModel):
    model_config = ConfigDict(frozen=True)

    clamp_eps: float = Field(1e-7, gt=0)


class AnalysisDefaults(BaseModel):
    model_config = ConfigDict(frozen=True)

    divergence_threshold: float = Field(1.0, gt=0)
    table_n: int = 1024


class VerifyDefaults(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_n: int = 1024
    oracle_max_n: int = 4096
    oracle_tolerance: float = Field(1e-11, gt=0)
    seed: int = 2024


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    cli: CliDefaults = CliDefaults()
    twiddle: TwiddleDefaults = TwiddleDefaults()
    analysis: AnalysisDefaults = AnalysisDefaults()
    verify: VerifyDefaults = VerifyDefaults()


@lru_cache(maxsize=1)
def load_settings() -> Settings:
    return Settings.model_validate(_read_yaml(os.path.join(CONFIG_DIR, "defaults.yaml")))


def load_logging_config() -> Dict[str, Any]:
    return _read_yaml(os.path.join(CONFIG_DIR, "logging.yaml"))
