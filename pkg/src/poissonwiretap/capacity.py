"""Secrecy capacity and rate-equivocation region of the degraded Poisson pair.

All information quantities are in nats (per unit time unless noted).  The
central object is the Jensen gap of a convex function f at mean duty cycle
alpha under the extremal {0,1}-supported input distribution,

    gap(f, alpha) = alpha*f(1) + (1-alpha)*f(0) - f(alpha),

with f either phi_u(x) = (a_u*x + lambda_u) * ln(a_u*x + lambda_u) for a
single receiver, or the difference K = phi_y - phi_z for the wiretap pair.
The secrecy capacity is max_alpha gap(K, alpha); the optimizer solves
K'(alpha) = K(1) - K(0) by bisection, valid because K' is strictly
increasing on a strictly degraded pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelParams,
    NotDegradedError,
    check_degraded,
    is_strictly_degraded,
    require_degraded,
)

DEFAULT_SOLVER_TOL = 1e-12
_MAX_BISECT_ITER = 200
# Lower bracket when K'(0) diverges (zero legitimate dark current).
_SINGULAR_LO = 1e-15
# Agreement demanded between the gap form and the product-form capacity
# expression; both are computed and cross-checked on every solve.
_CROSS_CHECK_RTOL = 1e-10


@dataclass(frozen=True)
class CapacityResult:
    """Solver output.  alpha_star is meaningless (held at 0) when c_s == 0
    because the two channels are identical."""

    alpha_star: float
    c_s: float
    c_main: float
    c_eaves: float


@dataclass(frozen=True)
class RegionPoint:
    """Per-duty-cycle bounds: R <= r_max and R*d <= rd_max."""

    alpha: float
    r_max: float
    rd_max: float


def xlogx(v):
    """v * ln(v) with the 0 * ln(0) = 0 convention, elementwise."""
    v = np.asarray(v, dtype=float)
    out = np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def phi(a: float, lam: float, x):
    """(a*x + lam) * ln(a*x + lam) for intensity x in [0, 1]."""
    if not a > 0:
        raise ValueError(f"gain must be positive, got {a}")
    if lam < 0:
        raise ValueError(f"dark current must be nonnegative, got {lam}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 1):
        raise ValueError("intensity must lie in [0, 1]")
    return xlogx(a * x + lam)


def k_gap(p: ChannelParams, x):
    """K(x) = phi_y(x) - phi_z(x), the per-time secrecy integrand."""
    return phi(p.a_y, p.lambda_y, x) - phi(p.a_z, p.lambda_z, x)


def k_prime(p: ChannelParams, x: float) -> float:
    """Analytic derivative of k_gap at a scalar x in [0, 1].

    Returns -inf (legitimate rate hits zero faster) or +inf where the log
    terms diverge; for identical channels the divergences cancel to 0.
    """
    if x < 0 or x > 1:
        raise ValueError("intensity must lie in [0, 1]")
    ry = p.a_y * x + p.lambda_y
    rz = p.a_z * x + p.lambda_z
    if ry == 0.0 and rz == 0.0:
        return 0.0 if p.a_y == p.a_z else -math.inf
    if ry == 0.0:
        return -math.inf
    if rz == 0.0:
        return math.inf
    return p.a_y * math.log(ry) + p.a_y - p.a_z * math.log(rz) - p.a_z


def k_double_prime(p: ChannelParams, x):
    """Closed-form second derivative of k_gap; nonnegative on degraded pairs."""
    x = np.asarray(x, dtype=float)
    num = p.a_z * p.a_y * (p.a_y - p.a_z) * x + p.lambda_z * p.a_y**2 - p.lambda_y * p.a_z**2
    den = (p.a_y * x + p.lambda_y) * (p.a_z * x + p.lambda_z)
    with np.errstate(divide="ignore"):
        out = num / den
    return float(out) if out.ndim == 0 else out


def two_point_gap(f, alpha):
    """Jensen gap alpha*f(1) + (1-alpha)*f(0) - f(alpha) of a scalar function."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0) or np.any(alpha > 1):
        raise ValueError("alpha must lie in [0, 1]")
    out = alpha * f(1.0) + (1.0 - alpha) * f(0.0) - f(alpha)
    return float(out) if out.ndim == 0 else out


def _bisect_increasing(g, lo: float, hi: float, tol: float, scale: float) -> float:
    """Root of a strictly increasing g on [lo, hi].

    Converges on both the bracket width (so the root itself is located to
    within tol even when g is nearly flat) and the residual |g| <= tol*scale.
    """
    glo, ghi = g(lo), g(hi)
    if glo > 0 or ghi < 0:
        raise ArithmeticError(f"root not bracketed: g({lo})={glo}, g({hi})={ghi}")
    mid = 0.5 * (lo + hi)
    for _ in range(_MAX_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol and abs(gm) <= tol * scale:
            break
    return mid


def solve_alpha_star(p: ChannelParams, tol: float = DEFAULT_SOLVER_TOL) -> float:
    """Duty cycle maximizing the secrecy gap, for a strictly degraded pair.

    Solves K'(alpha) = K(1) - K(0) by bisection.  K' is strictly increasing
    (K'' > 0), so the root is unique; the bracket starts just above zero when
    lambda_y = 0 makes K'(0) diverge.  The root is cross-checked against the
    equivalent product-form stationarity condition before returning.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not is_strictly_degraded(p):
        raise NotDegradedError(
            "alpha_star is undefined for identical channels (secrecy capacity 0)"
        )
    target = k_gap(p, 1.0) - k_gap(p, 0.0)
    scale = max(1.0, abs(target))
    lo = 0.0 if math.isfinite(k_prime(p, 0.0)) else _SINGULAR_LO
    alpha = _bisect_increasing(lambda a: k_prime(p, a) - target, lo, 1.0, tol, scale)

    # Same stationarity condition written as equality of log products:
    # a_y*ln(a_y a + l_y) - a_z*ln(a_z a + l_z) versus the endpoint terms.
    lhs = p.a_y * math.log(p.a_y * alpha + p.lambda_y) - p.a_z * math.log(p.a_z * alpha + p.lambda_z)
    rhs = (
        p.a_z
        - p.a_y
        + xlogx(p.a_y + p.lambda_y)
        - xlogx(p.a_z + p.lambda_z)
        + xlogx(p.lambda_z)
        - xlogx(p.lambda_y)
    )
    assert abs(lhs - rhs) <= 10 * tol * max(1.0, abs(rhs)), (lhs, rhs)
    return alpha


def _capacity_product_form(p: ChannelParams, alpha: float) -> float:
    """Capacity at the optimizer written with endpoint log-product terms.

    Requires alpha > 0 so the log arguments stay positive; dark-current
    exponents of zero drop their terms by the 0^0 = 1 convention.
    """
    return (
        alpha * (p.a_y - p.a_z)
        + xlogx(p.lambda_y)
        - xlogx(p.lambda_z)
        + p.lambda_z * math.log(p.a_z * alpha + p.lambda_z)
        - p.lambda_y * math.log(p.a_y * alpha + p.lambda_y)
    )


def secrecy_capacity(p: ChannelParams, tol: float = DEFAULT_SOLVER_TOL) -> CapacityResult:
    """Secrecy capacity of a degraded pair, with both channels' own capacities.

    Identical channels yield c_s = 0 (alpha_star reported as 0).  Otherwise
    c_s = gap(K, alpha_star); the independent product-form expression is
    evaluated as well and the two must agree to within 1e-10 relative.
    """
    require_degraded(p)
    _, c_main = single_channel_capacity(p.a_y, p.lambda_y, tol)
    _, c_eaves = single_channel_capacity(p.a_z, p.lambda_z, tol)
    if not is_strictly_degraded(p):
        return CapacityResult(alpha_star=0.0, c_s=0.0, c_main=c_main, c_eaves=c_eaves)
    alpha = solve_alpha_star(p, tol)
    c_gap = two_point_gap(lambda x: k_gap(p, x), alpha)
    c_closed = _capacity_product_form(p, alpha)
    assert math.isclose(c_gap, c_closed, rel_tol=_CROSS_CHECK_RTOL, abs_tol=1e-14), (
        c_gap,
        c_closed,
    )
    return CapacityResult(alpha_star=alpha, c_s=c_gap, c_main=c_main, c_eaves=c_eaves)


def single_channel_capacity(a: float, lam: float, tol: float = DEFAULT_SOLVER_TOL):
    """(argmax, max) over alpha of the single-receiver gap for rate a*x + lam.

    The argmax has the closed form (1+s)^(1+s) / (e * s^s) - s with s = lam/a;
    the bisection result is checked against it and returned.
    """
    gap = lambda alpha: two_point_gap(lambda x: phi(a, lam, x), alpha)
    target = phi(a, lam, 1.0) - phi(a, lam, 0.0)
    scale = max(1.0, abs(target))
    lo = 0.0 if lam > 0 else _SINGULAR_LO

    def g(alpha):
        r = a * alpha + lam
        return (-math.inf if r == 0 else a * math.log(r) + a) - target

    alpha = _bisect_increasing(g, lo, 1.0, tol, scale)
    sigma = lam / a
    alpha_closed = math.exp(xlogx(1.0 + sigma) - xlogx(sigma) - 1.0) - sigma
    assert abs(alpha - alpha_closed) <= 1e-9, (alpha, alpha_closed)
    return alpha, gap(alpha)


def rate_at_alpha(p: ChannelParams, alpha):
    """(r_bound, rd_bound) at duty cycle alpha: the rate and rate-equivocation
    product bounds of the achievable region."""
    require_degraded(p)
    r = two_point_gap(lambda x: phi(p.a_y, p.lambda_y, x), alpha)
    rd = two_point_gap(lambda x: k_gap(p, x), alpha)
    return r, rd


def region_boundary(p: ChannelParams, n_grid: int) -> list[RegionPoint]:
    """Per-alpha bound pairs on a uniform grid of n_grid points over [0, 1]."""
    require_degraded(p)
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    alphas = np.linspace(0.0, 1.0, n_grid)
    r, rd = rate_at_alpha(p, alphas)
    return [RegionPoint(float(a), float(rv), float(rdv)) for a, rv, rdv in zip(alphas, r, rd)]


def region_contains(
    p: ChannelParams,
    r: float,
    d: float,
    n_grid: int = 1001,
    tol: float = 1e-9,
) -> bool:
    """Membership test for a rate-equivocation pair (r, d).

    Accepts iff d <= 1 + tol and some duty cycle satisfies both bounds up to
    tol.  The margin min(r_bound - r, rd_bound - r*d) is concave in alpha, so
    a grid scan followed by one golden-section refinement around the best
    cell locates its maximum.
    """
    require_degraded(p)
    if r < 0 or d < 0:
        raise ValueError("rate and equivocation must be nonnegative")
    if d > 1 + tol:
        return False

    alphas = np.linspace(0.0, 1.0, n_grid)
    rb, rdb = rate_at_alpha(p, alphas)
    margins = np.minimum(rb - r, rdb - r * d)
    best = int(np.argmax(margins))
    if margins[best] >= -tol:
        return True

    def margin(alpha: float) -> float:
        rv, rdv = rate_at_alpha(p, alpha)
        return min(rv - r, rdv - r * d)

    lo = alphas[max(best - 1, 0)]
    hi = alphas[min(best + 1, n_grid - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = margin(x1), margin(x2)
    for _ in range(80):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = margin(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = margin(x1)
    return max(f1, f2) >= -tol


def mi_upper_bound(p_on, interval_len: float, a: float, lam: float) -> float:
    """Total-nats information bound for a {0,1}-valued piecewise-constant
    ensemble with given per-interval on-probabilities."""
    if not interval_len > 0:
        raise ValueError("interval_len must be positive")
    probs = np.asarray(p_on, dtype=float)
    if np.any(probs < 0) or np.any(probs > 1):
        raise ValueError("on-probabilities must lie in [0, 1]")
    gaps = two_point_gap(lambda x: phi(a, lam, x), probs)
    return float(interval_len * np.sum(gaps))
