import numpy as np
import pytest

from poissonwiretap.gaussian import (
    GaussianParams,
    gaussian_cs_bounds_finite,
    gaussian_cs_infinite,
    n_tilde,
)


def test_params_validated():
    with pytest.raises(ValueError):
        GaussianParams(0, 1, 1)
    with pytest.raises(ValueError):
        GaussianParams(1, 1, -1)


def test_n_tilde():
    assert n_tilde(GaussianParams(1, 1, 1)) == pytest.approx(2.0)
    assert n_tilde(GaussianParams(1, 2, 2)) == pytest.approx(4.0)
    # huge eavesdropper noise: effective level collapses to n1
    assert n_tilde(GaussianParams(1, 1, 1e9)) == pytest.approx(1.0, rel=1e-8)


def test_cs_infinite():
    assert gaussian_cs_infinite(GaussianParams(1, 1, 1)) == pytest.approx(0.5)
    assert gaussian_cs_infinite(GaussianParams(2, 1, 1)) == pytest.approx(1.0)
    # vanishing degradation leaves no secrecy advantage
    assert gaussian_cs_infinite(GaussianParams(1, 1, 1e-9)) == pytest.approx(0.0, abs=1e-8)


def test_finite_bounds_unit_case():
    lower, upper = gaussian_cs_bounds_finite(GaussianParams(1, 1, 1), 1.0)
    assert lower == pytest.approx(np.log(2) - np.log(1.5), abs=1e-12)
    assert upper == pytest.approx(np.log(1.5), abs=1e-12)


def test_finite_bounds_wideband_limit():
    g = GaussianParams(1, 1, 1)
    lower, upper = gaussian_cs_bounds_finite(g, 1e6)
    target = gaussian_cs_infinite(g)
    assert lower == pytest.approx(target, rel=1e-4)
    assert upper == pytest.approx(target, rel=1e-4)


def test_bounds_ordered_and_convergent_on_log_grid():
    for g in [GaussianParams(1, 1, 1), GaussianParams(2, 0.5, 3), GaussianParams(0.3, 2, 0.1)]:
        grid = np.logspace(-2, 8, 41)
        pairs = [gaussian_cs_bounds_finite(g, b) for b in grid]
        assert all(lo <= up + 1e-15 for lo, up in pairs)
        lowers = [lo for lo, _ in pairs]
        assert all(b >= a - 1e-12 for a, b in zip(lowers, lowers[1:]))
        b_big = 1e6 * g.power / min(g.n1, n_tilde(g))
        lo, up = gaussian_cs_bounds_finite(g, b_big)
        target = gaussian_cs_infinite(g)
        assert abs(lo - target) <= 1e-3 * target
        assert abs(up - target) <= 1e-3 * target


def test_bandwidth_validated():
    with pytest.raises(ValueError):
        gaussian_cs_bounds_finite(GaussianParams(1, 1, 1), 0.0)
