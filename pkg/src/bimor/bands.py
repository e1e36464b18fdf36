"""Time and frequency windows with infinite-horizon sentinels."""

from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError

INF = np.inf


def _check_band(lo, hi, what):
    if not np.isfinite(lo) or lo < 0:
        raise ValidationError(f"{what} lower endpoint must be finite and >= 0, got {lo}")
    if not hi > lo:
        raise ValidationError(f"{what} must satisfy lo < hi, got [{lo}, {hi}]")


@dataclass(frozen=True)
class TimeBand:
    """Time window [lo, hi] in seconds; hi may be +inf."""

    lo: float
    hi: float

    def __post_init__(self):
        _check_band(self.lo, self.hi, "time band")

    @property
    def is_infinite(self):
        return np.isinf(self.hi)

    @property
    def starts_at_zero(self):
        return self.lo == 0.0


@dataclass(frozen=True)
class FreqBand:
    """Frequency window [lo, hi] in rad/s, interpreted symmetrically as
    [-hi, -lo] union [lo, hi]; hi may be +inf."""

    lo: float
    hi: float

    def __post_init__(self):
        _check_band(self.lo, self.hi, "frequency band")

    @property
    def is_infinite(self):
        return np.isinf(self.hi)

    @property
    def starts_at_zero(self):
        return self.lo == 0.0
