"""Infinite-bandwidth Gaussian wiretap comparison point.

Closed forms only: the exact wideband secrecy capacity P/N1 - P/(N1+N2) and
the finite-bandwidth lower/upper sandwich that converges to it.  Serves as a
cross-domain regression anchor for the Poisson results; no Gaussian channel
is ever simulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class GaussianParams:
    """Power constraint and the two noise spectral levels, all positive."""

    power: float
    n1: float
    n2: float

    def __post_init__(self):
        if not (self.power > 0 and self.n1 > 0 and self.n2 > 0):
            raise ValueError(f"all Gaussian parameters must be positive, got {self}")


def n_tilde(g: GaussianParams) -> float:
    """Effective noise level: 1/n_tilde = 1/n1 - 1/(n1+n2)."""
    return g.n1 * (g.n1 + g.n2) / g.n2


def gaussian_cs_infinite(g: GaussianParams) -> float:
    """Exact wideband secrecy capacity, nats per unit time."""
    return g.power / g.n1 - g.power / (g.n1 + g.n2)


def gaussian_cs_bounds_finite(g: GaussianParams, b: float) -> tuple[float, float]:
    """(lower, upper) secrecy-capacity bounds at bandwidth b.

    lower = B ln(1 + P/(B n1)) - B ln(1 + P/(B (n1+n2)))
    upper = B ln(1 + P/(B n_tilde))

    Both tend to the wideband value as b grows; lower <= upper always.
    """
    if not b > 0:
        raise ValueError(f"bandwidth must be positive, got {b}")
    lower = b * math.log1p(g.power / (b * g.n1)) - b * math.log1p(g.power / (b * (g.n1 + g.n2)))
    upper = b * math.log1p(g.power / (b * n_tilde(g)))
    return lower, upper
