"""Physical parameters of the direct-detection wiretap pair.

The legitimate receiver observes a doubly stochastic Poisson process with
instantaneous rate ``a_y * x(t) + lambda_y``; the eavesdropper observes one
with rate ``a_z * x(t) + lambda_z``.  The eavesdropper's channel is degraded
when it can be synthesized from the legitimate one by adding independent dark
counts and then thinning, which holds iff

    a_y >= a_z   and   lambda_y <= (a_y / a_z) * lambda_z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

# Inequalities are sharp; a relative band keeps boundary cases entered as
# decimals (0.1 + 0.2 vs 0.3) classified stably.
DEFAULT_REL_TOL = 1e-12

PARAM_KEYS = ("a_y", "lambda_y", "a_z", "lambda_z")


class NotDegradedError(ValueError):
    """Raised when an operation requires a (strictly) degraded parameter set."""


def _leq(a: float, b: float, rel_tol: float) -> bool:
    """a <= b up to a relative tolerance band."""
    return a <= b + rel_tol * max(abs(a), abs(b))


def _lt(a: float, b: float, rel_tol: float) -> bool:
    """a < b by more than the tolerance band."""
    return a < b - rel_tol * max(abs(a), abs(b))


@dataclass(frozen=True)
class ChannelParams:
    """Gains and dark currents of the two receivers, in physical units."""

    a_y: float
    lambda_y: float
    a_z: float
    lambda_z: float

    def __post_init__(self):
        if not (self.a_y > 0 and self.a_z > 0):
            raise ValueError(f"gains must be positive, got a_y={self.a_y}, a_z={self.a_z}")
        if not (self.lambda_y >= 0 and self.lambda_z >= 0):
            raise ValueError(
                f"dark currents must be nonnegative, got lambda_y={self.lambda_y}, "
                f"lambda_z={self.lambda_z}"
            )

    @classmethod
    def degraded(cls, a_y, lambda_y, a_z, lambda_z, rel_tol=DEFAULT_REL_TOL) -> "ChannelParams":
        """Construct a parameter set, additionally enforcing degradedness."""
        p = cls(a_y, lambda_y, a_z, lambda_z)
        require_degraded(p, rel_tol)
        return p

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelParams":
        missing = [k for k in PARAM_KEYS if k not in d]
        if missing:
            raise ValueError(f"missing channel parameter keys: {missing}")
        return cls(*(float(d[k]) for k in PARAM_KEYS))

    @classmethod
    def from_json(cls, text: str) -> "ChannelParams":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in PARAM_KEYS}


def check_degraded(p: ChannelParams, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    """True iff the eavesdropper's channel is degraded w.r.t. the legitimate one."""
    gain_ok = _leq(p.a_z, p.a_y, rel_tol)
    dark_ok = _leq(p.lambda_y, (p.a_y / p.a_z) * p.lambda_z, rel_tol)
    return gain_ok and dark_ok


def require_degraded(p: ChannelParams, rel_tol: float = DEFAULT_REL_TOL) -> None:
    if not check_degraded(p, rel_tol):
        raise NotDegradedError(
            "channel parameters are not degraded: need a_y >= a_z and "
            f"lambda_y <= (a_y/a_z)*lambda_z, got {p.to_dict()}"
        )


def is_strictly_degraded(p: ChannelParams, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    """True iff degraded with at least one inequality strict.

    Both equalities mean the two channels are statistically identical and the
    secrecy capacity is zero.
    """
    require_degraded(p, rel_tol)
    gain_strict = _lt(p.a_z, p.a_y, rel_tol)
    dark_strict = _lt(p.lambda_y, (p.a_y / p.a_z) * p.lambda_z, rel_tol)
    return gain_strict or dark_strict


def auxiliary_dark_rate(p: ChannelParams, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Rate of the independent dark-count process in the degradation pipeline."""
    require_degraded(p, rel_tol)
    return max(0.0, (p.a_y / p.a_z) * p.lambda_z - p.lambda_y)


def thinning_keep_prob(p: ChannelParams, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Per-arrival survival probability of the thinning stage, in (0, 1]."""
    require_degraded(p, rel_tol)
    return min(1.0, p.a_z / p.a_y)
