from typing import Any, Dict, List, Optional, Sequence, Tuple
import numpy as np
from app.models.config_models import ProblemConfig
from app.models.point_models import Point
from app.services.meyerson_sketch import Assignment, MultiSketch, SingleSketch
from app.services.metric import EUCLIDEAN, DistanceMeter, Metric
from app.utils.seeding import derive_rng


class GuessGrid:
    """One MultiSketch per guess L^p ∈ {m, 2m, 4m, …, 2^⌈log₂(M/m)⌉·m}."""

    def __init__(self, config: ProblemConfig, seed_key: Sequence[int]):
        self.config = config
        self.seed_key = tuple(seed_key)
        self.guesses: List[float] = config.guesses()
        self.sketches: List[MultiSketch] = [
            self._build_multi(g, guess) for g, guess in enumerate(self.guesses)
        ]

    def _build_multi(self, guess_index: int, guess: float) -> MultiSketch:
        cfg = self.config
        copies = [
            SingleSketch(guess, cfg.copy_size_cap, cfg.sampling_factor, cfg.p)
            for _ in range(cfg.copy_count)
        ]
        rngs = [
            derive_rng(cfg.seed, self.seed_key + (guess_index, c))
            for c in range(cfg.copy_count)
        ]
        return MultiSketch(copies, rngs)

    def update(
        self,
        x: Point,
        meter: DistanceMeter,
        metric: Metric = EUCLIDEAN,
        coins: Optional[Sequence[float]] = None
    ) -> List[List[Assignment]]:
        """Feed x to every copy of every guess.

        Copy c of every guess promotes x against the same draw coins[c].
        """
        return [multi.update(x, meter, metric, coins) for multi in self.sketches]

    def rollback(self, records: List[List[Assignment]]) -> None:
        for multi, copy_records in zip(self.sketches, records):
            for sketch, record in zip(multi.copies, copy_records):
                sketch.rollback(record)

    def select_guess(self) -> Optional[Tuple[int, int]]:
        """Smallest guess whose best copy passes the size and cost filters.

        Returns:
            (guess index, copy index), or None when no guess qualifies
        """
        size_bound = self.config.selection_size_bound
        cost_factor = 2 ** (self.config.p + 6)
        for g, multi in enumerate(self.sketches):
            c = multi.select_copy()
            if c is None:
                continue
            sketch = multi.copies[c]
            if len(sketch) >= size_bound:
                continue
            if sketch.cost_mu >= cost_factor * self.guesses[g]:
                continue
            return g, c
        return None

    def copy_at(self, guess_index: int, copy_index: int) -> SingleSketch:
        return self.sketches[guess_index].copies[copy_index]

    def all_copies(self) -> List[Tuple[int, int, SingleSketch]]:
        return [
            (g, c, sketch)
            for g, multi in enumerate(self.sketches)
            for c, sketch in enumerate(multi.copies)
        ]

    def to_state(self) -> Dict[str, Any]:
        return {
            "seed_key": list(self.seed_key),
            "copies": [
                [sketch.to_state() for sketch in multi.copies] for multi in self.sketches
            ],
            "rngs": [
                [rng.bit_generator.state for rng in multi.rngs] for multi in self.sketches
            ],
        }

    @classmethod
    def from_state(cls, config: ProblemConfig, state: Dict[str, Any]) -> "GuessGrid":
        grid = cls.__new__(cls)
        grid.config = config
        grid.seed_key = tuple(state["seed_key"])
        grid.guesses = config.guesses()
        grid.sketches = []
        for copy_states, rng_states in zip(state["copies"], state["rngs"]):
            rngs = []
            for rng_state in rng_states:
                rng = np.random.default_rng()
                rng.bit_generator.state = rng_state
                rngs.append(rng)
            grid.sketches.append(
                MultiSketch([SingleSketch.from_state(s) for s in copy_states], rngs)
            )
        return grid
