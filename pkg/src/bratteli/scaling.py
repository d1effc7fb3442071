"""Log-scaled positive vectors.

Path-sum vectors grow or decay geometrically with the level, so they are
stored as a mantissa vector together with one shared log-scale factor.
Every exported quantity in the package is a ratio in which the scale
factors cancel, so no exp/log round trip is ever applied to a full-size
value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class ScaledVector:
    """A strictly positive vector ``mantissa * exp(log_scale)``."""

    mantissa: np.ndarray
    log_scale: float

    def __post_init__(self) -> None:
        m = np.asarray(self.mantissa, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise InvalidArgumentError("mantissa must be a nonempty 1-d vector")
        if not np.all(m > 0.0):
            raise InvalidArgumentError("scaled vector entries must be strictly positive")
        object.__setattr__(self, "mantissa", m)

    @classmethod
    def from_values(cls, values) -> "ScaledVector":
        """Wrap plain positive values, renormalizing so max(mantissa) == 1."""
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise InvalidArgumentError("values must be a nonempty 1-d vector")
        if not np.all(v > 0.0):
            raise InvalidArgumentError("values must be strictly positive")
        top = float(v.max())
        return cls(v / top, float(np.log(top)))

    @classmethod
    def ones(cls, size: int) -> "ScaledVector":
        return cls(np.ones(size), 0.0)

    def __len__(self) -> int:
        return int(self.mantissa.size)

    def values(self) -> np.ndarray:
        """Plain float values; may overflow/underflow for extreme scales."""
        return self.mantissa * np.exp(self.log_scale)

    def log_values(self) -> np.ndarray:
        return np.log(self.mantissa) + self.log_scale

    def log_entry(self, i: int) -> float:
        return float(np.log(self.mantissa[i]) + self.log_scale)

    def normalized(self) -> "ScaledVector":
        """Same value with max(mantissa) == 1."""
        top = float(self.mantissa.max())
        return ScaledVector(self.mantissa / top, self.log_scale + float(np.log(top)))

    def scaled_by_log(self, delta: float) -> "ScaledVector":
        return ScaledVector(self.mantissa, self.log_scale + delta)
