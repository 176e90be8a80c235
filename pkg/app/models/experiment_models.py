from enum import Enum
from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field, field_validator, model_validator
from app.models.config_models import CopyMode, ProblemConfig, QueryMode, SelectionRule, UpdateMode


class StreamOrder(str, Enum):
    NATURAL = "natural"
    SHUFFLED = "shuffled"


class Algorithm(str, Enum):
    SKETCH = "sketch"
    SAMPLING = "sampling"
    BATCH = "batch"


class SynthSpec(BaseModel):
    """Parameters of a synthetic Gaussian-blob stream."""
    k_true: int = Field(..., ge=1)
    n: int = Field(..., ge=0)
    d: int = Field(..., ge=1)
    separation: float = Field(..., gt=0.0)

    @classmethod
    def parse(cls, text: str) -> "SynthSpec":
        """Parse the compact form k:n:d:sep, e.g. 15:50000:2:8."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"Synthetic spec '{text}' must look like k:n:d:sep")
        k_true, n, d, separation = parts
        return cls(k_true=int(k_true), n=int(n), d=int(d), separation=float(separation))


class StreamSource(BaseModel):
    """Where the stream comes from and how it is prepared."""
    path: Optional[str] = None
    synth: Optional[SynthSpec] = None
    order: StreamOrder = StreamOrder.NATURAL
    label_column: Optional[int] = Field(default=None, ge=0)
    standardize: bool = True

    @model_validator(mode="after")
    def validate_origin(self) -> "StreamSource":
        """Exactly one of path and synth must be given."""
        if (self.path is None) == (self.synth is None):
            raise ValueError("Stream source needs exactly one of path or synth")
        return self


class ExperimentSpec(BaseModel):
    """One benchmark run: problem parameters, stream, algorithms and output."""
    source: StreamSource
    window: int = Field(..., ge=1)
    k: int = Field(..., ge=1)
    p: float = Field(default=2.0, ge=1.0)
    epsilon: float = Field(default=0.05, gt=0.0, lt=1.0)
    delta: float = Field(default=0.2, gt=0.0)
    gamma: float = Field(default=0.1, gt=0.0, lt=1.0)
    beta: float = Field(default=16.0, ge=1.0)
    eta: float = Field(default=0.05, gt=0.0)
    copies: CopyMode = CopyMode.SINGLE
    use_log_window: bool = False
    update_mode: UpdateMode = UpdateMode.LAZY
    query_mode: QueryMode = QueryMode.BEST_EFFORT
    selection_rule: SelectionRule = SelectionRule.PSEUDOCODE
    use_replacements: bool = True
    lloyd_iters: int = Field(default=10, ge=0)
    bounded: bool = False

    algos: List[Algorithm] = Field(default_factory=lambda: list(Algorithm), min_length=1)
    query_every: int = Field(default=100, ge=1)
    bounds_samples: int = Field(default=10, ge=1)
    batch_runs: int = Field(default=10, ge=1)
    sample_cap: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)
    out: Optional[str] = None

    @field_validator("algos")
    @classmethod
    def validate_unique_algos(cls, algos: List[Algorithm]) -> List[Algorithm]:
        """Keep the first occurrence of each algorithm."""
        return list(dict.fromkeys(algos))

    @property
    def sample_size_cap(self) -> int:
        """Upper limit on sampler count for the sampling baseline."""
        if self.sample_cap is not None:
            return max(self.k, self.sample_cap)
        return max(self.k, self.window // 4)

    def problem_config(self, lower_bound: float, upper_bound: float, distance_bound: float) -> ProblemConfig:
        """Bind estimated bounds to this experiment's problem parameters."""
        return ProblemConfig(
            k=self.k,
            p=self.p,
            epsilon=self.epsilon,
            delta=self.delta,
            gamma=self.gamma,
            beta=self.beta,
            eta=self.eta,
            window=self.window,
            lower_bound=lower_bound,
            upper_bound=upper_bound,
            distance_bound=max(1.0, distance_bound),
            copies=self.copies,
            use_log_window=self.use_log_window,
            update_mode=self.update_mode,
            query_mode=self.query_mode,
            selection_rule=self.selection_rule,
            use_replacements=self.use_replacements,
            lloyd_iters=self.lloyd_iters,
            seed=self.seed,
        )


class ExperimentRequest(ExperimentSpec):
    """HTTP request body; results come back in the response instead of a file."""

    @field_validator("out")
    @classmethod
    def validate_no_output(cls, out: Optional[str]) -> Optional[str]:
        if out is not None:
            raise ValueError("Output paths are not accepted over HTTP")
        return out


class MetricsRow(BaseModel):
    """One (query time, algorithm) measurement."""
    t: int = Field(..., ge=1)
    algo: Algorithm
    cost: float = Field(..., ge=0.0)
    estimated_cost: Optional[float] = None
    points_stored: int = Field(..., ge=0)
    distance_evals: int = Field(..., ge=0)
    v_measure: Optional[float] = None


class ExperimentResponse(BaseModel):
    """Success response model."""
    status: str = Field(default="success")
    rows: List[MetricsRow]
    summary: Dict[str, Dict[str, Any]]


class ErrorResponse(BaseModel):
    """Error response model."""
    status: str = Field(default="error")
    message: str = Field(..., min_length=1)
