import math
from enum import Enum
from typing import List
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class CopyMode(str, Enum):
    """How many Meyerson copies run per guess."""
    SINGLE = "single"
    FULL = "full"


class UpdateMode(str, Enum):
    """How a λ pair decides whether to rotate."""
    LAZY = "lazy"
    EXACT = "exact"


class QueryMode(str, Enum):
    """Which λ pairs a window query may use."""
    BEST_EFFORT = "best_effort"
    STRICT = "strict"


class SelectionRule(str, Enum):
    """Rule picking λ* in strict queries."""
    PSEUDOCODE = "pseudocode"
    PROOF = "proof"


class ProblemConfig(BaseModel):
    """Parameters shared by every sketch of one sliding-window run."""
    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1)
    p: float = Field(default=2.0, ge=1.0)
    epsilon: float = Field(default=0.05, gt=0.0, lt=1.0)
    delta: float = Field(default=0.2, gt=0.0)
    gamma: float = Field(default=0.1, gt=0.0, lt=1.0)
    alpha: float = Field(default=0.5, gt=0.0, lt=1.0)
    beta: float = Field(default=16.0, ge=1.0)
    eta: float = Field(default=0.05, gt=0.0)
    window: int = Field(..., ge=1)
    lower_bound: float = Field(..., gt=0.0)
    upper_bound: float = Field(..., gt=0.0)
    distance_bound: float = Field(..., ge=1.0)

    copies: CopyMode = CopyMode.SINGLE
    use_log_window: bool = False
    update_mode: UpdateMode = UpdateMode.LAZY
    query_mode: QueryMode = QueryMode.BEST_EFFORT
    selection_rule: SelectionRule = SelectionRule.PSEUDOCODE
    use_replacements: bool = True
    shell_floor: float = Field(default=1.0, gt=0.0)
    lloyd_iters: int = Field(default=10, ge=0)
    solver_restarts: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)

    @field_validator("p")
    @classmethod
    def validate_finite_norm(cls, p: float) -> float:
        """Reject infinite norms; k-center is a different problem."""
        if not math.isfinite(p):
            raise ValueError("p must be finite")
        return p

    @model_validator(mode="after")
    def validate_bounds(self) -> "ProblemConfig":
        """Check 0 < m <= M."""
        if self.lower_bound > self.upper_bound:
            raise ValueError("lower_bound must not exceed upper_bound")
        return self

    @property
    def log_spread(self) -> int:
        """Ceiling base-2 log of Δ, or of 2w when the window replaces the spread."""
        spread = 2 * self.window if self.use_log_window else self.distance_bound
        return max(0, math.ceil(math.log2(spread)))

    @property
    def log_inverse_gamma(self) -> int:
        return max(1, math.ceil(math.log2(1.0 / self.gamma)))

    @property
    def sampling_factor(self) -> float:
        """k(1 + log Δ), the numerator scale of the promotion probability."""
        return self.k * (1 + self.log_spread)

    @property
    def copy_count(self) -> int:
        return 1 if self.copies == CopyMode.SINGLE else 2 * self.log_inverse_gamma

    @property
    def copy_size_cap(self) -> int:
        """Per-copy center cap 4k(1+log Δ)(2^{p+3}/α^p + 1)."""
        factor = 2 ** (self.p + 3) / self.alpha ** self.p + 1
        return math.ceil(4 * self.sampling_factor * factor)

    @property
    def selection_size_bound(self) -> float:
        """Aggregate size filter 8k log γ⁻¹ (1+log Δ)(2^{2p+3} + 1)."""
        return 8 * self.log_inverse_gamma * self.sampling_factor * (2 ** (2 * self.p + 3) + 1)

    @property
    def cost_histogram_cap(self) -> float:
        return (1 + self.epsilon) * 2 ** (self.p + 7) * self.upper_bound

    def guesses(self) -> List[float]:
        """Optimum guesses m, 2m, 4m, … up to 2^⌈log₂(M/m)⌉·m."""
        steps = max(0, math.ceil(math.log2(self.upper_bound / self.lower_bound)))
        return [self.lower_bound * 2 ** i for i in range(steps + 1)]
