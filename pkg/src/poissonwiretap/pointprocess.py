"""Doubly stochastic Poisson process simulation on a finite horizon.

Intensity signals are piecewise constant (codewords are), which keeps
sampling exact: per constant segment the arrival count is Poisson with mean
rate * length, and given the count the arrivals are iid uniform on the
segment.  Superposition and thinning implement the degradation pipeline that
turns the legitimate receiver's process into the eavesdropper's.

All samplers take an explicit numpy Generator; identical seeds give
bit-identical arrival lists.  Arrivals live on the half-open interval (0, T].
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, auxiliary_dark_rate, require_degraded, thinning_keep_prob


@dataclass(frozen=True)
class Waveform:
    """Piecewise-constant intensity on [0, T] with values in [0, 1].

    breakpoints has one more entry than values, starts at 0 and ends at T.
    """

    horizon: float
    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if bp.ndim != 1 or vals.ndim != 1 or len(bp) != len(vals) + 1:
            raise ValueError("need len(breakpoints) == len(values) + 1")
        if bp[0] != 0.0 or bp[-1] != self.horizon:
            raise ValueError("breakpoints must start at 0 and end at the horizon")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(vals < 0) or np.any(vals > 1):
            raise ValueError("intensity values must lie in [0, 1] (peak constraint)")

    @classmethod
    def constant(cls, value: float, horizon: float) -> "Waveform":
        return cls(horizon, np.array([0.0, horizon]), np.array([float(value)]))

    @classmethod
    def from_dict(cls, d: dict) -> "Waveform":
        return cls(float(d["horizon"]), np.asarray(d["breakpoints"]), np.asarray(d["values"]))

    @classmethod
    def from_json(cls, text: str) -> "Waveform":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
        }

    def duty_cycle(self) -> float:
        return float(np.sum(self.values * np.diff(self.breakpoints)) / self.horizon)


@dataclass(frozen=True)
class ArrivalProcess:
    """Sorted arrival instants of one realization on (0, T]."""

    horizon: float
    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", t)
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if t.size and (np.any(np.diff(t) < 0) or t[0] <= 0 or t[-1] > self.horizon):
            raise ValueError("arrival times must be sorted and lie in (0, horizon]")

    def __len__(self) -> int:
        return int(self.times.size)


def sample_conditional_poisson(
    w: Waveform, a: float, lam: float, rng: np.random.Generator
) -> ArrivalProcess:
    """Sample arrivals with instantaneous rate a * x(t) + lam.

    Parameters
    ----------
    w : Waveform
        The intensity signal x(t).
    a, lam : float
        Gain (>= 0) and dark current (>= 0).
    rng : numpy.random.Generator
        Source of randomness; pass distinct spawned streams for parallel use.
    """
    if a < 0 or lam < 0:
        raise ValueError("gain and dark current must be nonnegative")
    starts = w.breakpoints[:-1]
    ends = w.breakpoints[1:]
    means = (a * w.values + lam) * (ends - starts)
    counts = rng.poisson(means)
    pieces = []
    for start, end, n in zip(starts, ends, counts):
        if n:
            # end - u*(end-start) with u in [0,1) keeps arrivals in (start, end]
            pieces.append(end - rng.random(n) * (end - start))
    if pieces:
        times = np.sort(np.concatenate(pieces))
    else:
        times = np.empty(0)
    return ArrivalProcess(w.horizon, times)


def sample_homogeneous(rate: float, horizon: float, rng: np.random.Generator) -> ArrivalProcess:
    """Homogeneous Poisson process of the given rate on (0, horizon]."""
    return sample_conditional_poisson(Waveform.constant(0.0, horizon), 0.0, rate, rng)


def thin(
    proc: ArrivalProcess, keep_prob: float, rng: np.random.Generator
) -> tuple[ArrivalProcess, ArrivalProcess]:
    """Independently keep each arrival with probability keep_prob.

    Returns (kept, erased); together they partition the input.
    """
    if not 0.0 <= keep_prob <= 1.0:
        raise ValueError(f"keep_prob must lie in [0, 1], got {keep_prob}")
    keep = rng.random(len(proc)) < keep_prob
    return (
        ArrivalProcess(proc.horizon, proc.times[keep]),
        ArrivalProcess(proc.horizon, proc.times[~keep]),
    )


def superpose(p1: ArrivalProcess, p2: ArrivalProcess) -> ArrivalProcess:
    """Merge two processes on the same horizon."""
    if p1.horizon != p2.horizon:
        raise ValueError(f"horizon mismatch: {p1.horizon} vs {p2.horizon}")
    return ArrivalProcess(p1.horizon, np.sort(np.concatenate([p1.times, p2.times])))


def degrade(y: ArrivalProcess, p: ChannelParams, rng: np.random.Generator) -> ArrivalProcess:
    """Synthesize the eavesdropper's observation from the legitimate one.

    Superposes independent dark counts at the auxiliary rate, then thins with
    keep probability a_z / a_y.
    """
    require_degraded(p)
    extra = sample_homogeneous(auxiliary_dark_rate(p), y.horizon, rng)
    kept, _ = thin(superpose(y, extra), thinning_keep_prob(p), rng)
    return kept


def count_in_intervals(proc: ArrivalProcess, cuts) -> np.ndarray:
    """Arrival counts per half-open interval (cuts[i], cuts[i+1]]."""
    cuts = np.asarray(cuts, dtype=float)
    if np.any(np.diff(cuts) <= 0):
        raise ValueError("cuts must be strictly increasing")
    if cuts[0] < 0 or cuts[-1] > proc.horizon:
        raise ValueError("cuts must lie within [0, horizon]")
    idx = np.searchsorted(proc.times, cuts, side="right")
    return np.diff(idx)
