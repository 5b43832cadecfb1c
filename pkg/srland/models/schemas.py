"""Pydantic models for run configuration, results and manifests."""
import json
import os
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from srland.exceptions import DataFormatError, ParameterError


class RunConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    dataset: Optional[str] = None
    graph: Literal['spatial', 'knn'] = 'spatial'
    radius: float = Field(3.0, ge=1)
    k_graph: Optional[int] = Field(None, ge=1)
    sampler: Literal['core', 'boundary', 'random'] = 'core'
    t: int = Field(30, ge=0)
    m: Optional[int] = Field(None, ge=1)
    kde_k: int = Field(100, ge=1)
    budget: int = Field(10, ge=1)
    modes: Optional[int] = Field(None, ge=1)
    ensure_coverage: bool = False
    consensus_threshold: float = Field(0.5, ge=0, lt=1)
    use_consensus: Optional[bool] = None
    sigma: Optional[float] = Field(None, gt=0)
    noise_variance: float = Field(1e-4, ge=0)
    seed: int = Field(0, ge=0)
    trials: int = Field(1, ge=1)
    input: Optional[str] = None
    gt: Optional[str] = None
    output_dir: Optional[str] = None

    @property
    def variant(self) -> str:
        prefix = 'sr' if self.graph == 'spatial' else 'knn'
        return f"{prefix}-{self.sampler}"

    @property
    def consensus_enabled(self) -> bool:
        if self.use_consensus is None:
            return self.graph == 'spatial'
        return self.use_consensus

    @property
    def is_random(self) -> bool:
        return self.sampler == 'random'

    @classmethod
    def from_file(cls, path: os.PathLike) -> "RunConfig":
        """Read a config file, or the `config` section of a run manifest."""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except OSError as e:
            raise DataFormatError(f"cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise DataFormatError(f"{path} is not valid JSON: {e}") from e
        if isinstance(data, dict) and isinstance(data.get('config'), dict) and 'command' in data:
            data = data['config']
        return cls.validate_dict(data)

    @classmethod
    def validate_dict(cls, data: dict) -> "RunConfig":
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ParameterError(f"invalid run configuration: {e}") from e


class RunRecord(BaseModel):
    dataset: str
    variant: str
    radius: Optional[float] = None
    k_graph: Optional[int] = None
    t: int
    m: int
    k: int
    budget: int
    budget_used: int
    seed: int
    overall_accuracy: float = Field(ge=0, le=1)
    average_accuracy: float = Field(ge=0, le=1)
    kappa: float = Field(ge=-1, le=1)
    seconds: float = Field(ge=0)
    bands: int
    modes: int
    fallback_count: int = 0
    deferred: int = 0
    provenance: Dict[str, int] = Field(default_factory=dict)
    coverage_warning: Optional[str] = None

    @model_validator(mode='after')
    def _budget_accounted(self):
        if self.budget_used < self.budget and not self.coverage_warning:
            raise ValueError("budget_used below the requested budget without a coverage warning")
        return self


class Manifest(BaseModel):
    config: RunConfig
    command: str = 'run'
    record: Optional[RunRecord] = None
    timings: Dict[str, float] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)
    parameters: Dict[str, Any] = Field(default_factory=dict)
