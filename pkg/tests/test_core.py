import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lm05decoy.core import (
    ChannelPoint,
    DeviceParams,
    DomainError,
    IntensitySet,
    MeasuredStats,
    binary_entropy,
    db_to_transmittance,
    tau,
)

probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
losses = st.floats(min_value=0.0, max_value=200.0, allow_nan=False)


@pytest.mark.parametrize(
    "e, expected, tol",
    [
        (0.5, 1.0, 0.0),
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        # mpmath 50-digit evaluation: 0.264191774506...
        (0.04487, 0.26419, 1e-5),
    ],
)
def test_binary_entropy_values(e, expected, tol):
    assert binary_entropy(e) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize(
    "e1, expected, tol",
    [
        (0.0, 0.0, 0.0),
        (0.5, 1.0, 0.0),
        (0.7, 1.0, 0.0),
        # mpmath 50-digit evaluation: 0.274454608450...
        (0.05546, 0.2744546, 1e-5),
    ],
)
def test_tau_values(e1, expected, tol):
    assert tau(e1) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
def test_scalar_domain_errors(bad):
    with pytest.raises(DomainError):
        binary_entropy(bad)
    with pytest.raises(DomainError):
        tau(bad)


def test_db_to_transmittance():
    assert db_to_transmittance(0.0) == 1.0
    assert db_to_transmittance(10.0) == pytest.approx(0.1, rel=1e-15)
    assert db_to_transmittance(3.26) == pytest.approx(0.47206, abs=1e-5)
    with pytest.raises(DomainError):
        db_to_transmittance(-1.0)


@given(probs)
def test_entropy_symmetric(e):
    assert binary_entropy(e) == pytest.approx(binary_entropy(1.0 - e), abs=1e-12)


@given(probs, probs)
def test_entropy_monotone_below_half(a, b):
    lo, hi = sorted((a / 2, b / 2))
    assert binary_entropy(lo) <= binary_entropy(hi) + 1e-15


@given(probs, probs)
def test_entropy_concave_midpoint(a, b):
    mid = binary_entropy((a + b) / 2)
    assert mid >= (binary_entropy(a) + binary_entropy(b)) / 2 - 1e-12
    assert mid <= 1.0


@given(probs, probs)
def test_tau_monotone_on_lower_half(a, b):
    lo, hi = sorted((a / 2, b / 2))
    assert tau(lo) <= tau(hi) + 1e-15


def test_tau_continuous_at_half():
    left = tau(math.nextafter(0.5, 0.0))
    assert abs(left - tau(0.5)) < 1e-12


@given(losses, losses)
def test_losses_compose(a, b):
    assert db_to_transmittance(a + b) == pytest.approx(
        db_to_transmittance(a) * db_to_transmittance(b), rel=1e-12, abs=1e-300
    )


def test_device_params_validation():
    DeviceParams()
    DeviceParams(e_detector=0.5)
    for kwargs in (
        {"eta_bob": 0.0},
        {"eta_bob": 1.5},
        {"e_detector": 0.6},
        {"y0": 1.0},
        {"e0": -0.1},
        {"f_ec": 0.9},
    ):
        with pytest.raises(DomainError):
            DeviceParams(**kwargs)


def test_intensity_ordering():
    IntensitySet(0.31, 0.13)
    for mu, nu in ((0.13, 0.31), (0.2, 0.2), (0.3, 0.0)):
        with pytest.raises(DomainError):
            IntensitySet(mu, nu)


def test_channel_point():
    assert ChannelPoint(10.0).transmittance == pytest.approx(0.1)
    with pytest.raises(DomainError):
        ChannelPoint(-0.5)


def test_measured_stats_invariants():
    MeasuredStats(1e-2, 0.04, 5e-3, 0.04, 4e-6)
    with pytest.raises(DomainError, match="e_mu"):
        MeasuredStats(1e-2, 1.5, 5e-3, 0.04, 4e-6)
    with pytest.raises(DomainError, match="q_nu"):
        MeasuredStats(1e-2, 0.04, 1e-6, 0.04, 4e-6)
