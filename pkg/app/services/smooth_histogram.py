import math
from bisect import bisect_right
from typing import Any, Dict, List, Tuple


class SmoothHistogram:
    """Suffix sums over a stream of (time, increment) records within a (1+ε) factor.

    Each entry holds the exact sum of increments recorded from its time on,
    together with the increment recorded at that time. Interior entries are
    dropped while their neighbours stay within a (1+ε) factor, and head
    entries whose sum exceeds cap are truncated.
    """

    def __init__(self, epsilon: float, cap: float):
        self.epsilon = epsilon
        self.cap = cap
        self.values: List[float] = []
        self.times: List[int] = []
        self.increments: List[float] = []
        self.truncated = False

    def __len__(self) -> int:
        return len(self.values)

    def record(self, t: int, increment: float) -> None:
        """Add increment at time t, which must follow every stored time."""
        if self.times and t <= self.times[-1]:
            raise ValueError(f"Out-of-order record: time {t} after {self.times[-1]}")
        if increment < 0:
            raise ValueError("Histogram increments must be nonnegative")
        self.values = [value + increment for value in self.values]
        self.values.append(increment)
        self.times.append(t)
        self.increments.append(increment)
        self._compact()

    def query(self, tau: int) -> float:
        """Estimate the sum of increments recorded at times ≥ tau."""
        if not self.times or tau > self.times[-1]:
            return 0.0
        j = bisect_right(self.times, tau) - 1
        if j < 0:
            head = self.values[0]
            return (1 + self.epsilon) * head if self.truncated else head
        if self.times[j] == tau:
            return self.values[j]
        return self.values[j] - self.increments[j]

    def max_length(self, smallest_value: float) -> int:
        """Length bound 2⌈log_{1+ε}(cap / smallest_value)⌉ + 2."""
        if smallest_value <= 0:
            return len(self.values)
        ratio = max(self.cap / smallest_value, 1.0)
        return 2 * math.ceil(math.log(ratio, 1 + self.epsilon)) + 2

    def _compact(self) -> None:
        factor = 1 + self.epsilon
        i = 1
        while i < len(self.values) - 1:
            if self.values[i - 1] <= factor * self.values[i + 1]:
                self._delete(i)
            else:
                i += 1
        while self.values and self.values[0] > self.cap:
            self._delete(0)
            self.truncated = True

    def _delete(self, index: int) -> None:
        del self.values[index]
        del self.times[index]
        del self.increments[index]

    def snapshot(self) -> Tuple[List[float], List[int], List[float], bool]:
        return list(self.values), list(self.times), list(self.increments), self.truncated

    def restore(self, snapshot: Tuple[List[float], List[int], List[float], bool]) -> None:
        values, times, increments, truncated = snapshot
        self.values, self.times, self.increments = list(values), list(times), list(increments)
        self.truncated = truncated

    def to_state(self) -> Dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "cap": self.cap,
            "values": self.values,
            "times": self.times,
            "increments": self.increments,
            "truncated": self.truncated,
        }

    @classmethod
    def from_state(cls, state: Dict[str, Any]) -> "SmoothHistogram":
        histogram = cls.__new__(cls)
        SmoothHistogram.__init__(histogram, state["epsilon"], state["cap"])
        histogram.restore((state["values"], state["times"], state["increments"], state["truncated"]))
        return histogram


class WeightHistogram(SmoothHistogram):
    """Suffix counts of points mapped to one center."""

    def __init__(self, epsilon: float, window: int):
        super().__init__(epsilon, (1 + epsilon) * window)

    def record_point(self, t: int) -> None:
        self.record(t, 1.0)


class CostHistogram(SmoothHistogram):
    """Suffix sums of mapping costs d(x, μ(x))^p; zero costs are not stored."""

    def record(self, t: int, increment: float) -> None:
        if increment == 0:
            return
        super().record(t, increment)
