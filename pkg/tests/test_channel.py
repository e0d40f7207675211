import numpy as np
import pytest

from lm05decoy.bounds import analyze
from lm05decoy.channel import (
    expected_gain,
    expected_qber,
    infinite_decoy_rate,
    overall_transmission,
    predict_stats,
    true_q12_e12,
    weak_vacuum_rate,
)
from lm05decoy.core import ChannelPoint, DeviceParams, IntensitySet

PAPER = DeviceParams(eta_bob=0.072, e_detector=0.045, y0=3.52e-6)
PERFECT = DeviceParams(eta_bob=1.0, e_detector=0.0, y0=0.0)
ETA_124 = 0.054117  # 0.072 at 1.24 dB


def test_overall_transmission():
    assert overall_transmission(DeviceParams(eta_bob=1.0), ChannelPoint(0)) == 1.0
    assert overall_transmission(PAPER, ChannelPoint(0)) == 0.072
    assert overall_transmission(PAPER, ChannelPoint(10)) == pytest.approx(7.2e-3, rel=1e-12)
    assert overall_transmission(PAPER, ChannelPoint(1.24)) == pytest.approx(ETA_124, rel=1e-4)


def test_expected_gain():
    assert expected_gain(PAPER, ETA_124, 0.0) == PAPER.y0
    assert expected_gain(PERFECT, 1.0, 800.0) == 1.0
    # mpmath: 1.66398520210078e-2
    assert expected_gain(PAPER, ETA_124, 0.31) == pytest.approx(1.6640e-2, abs=1e-5)


def test_expected_qber():
    assert expected_qber(PAPER, ETA_124, 0.0) == pytest.approx(0.5, rel=1e-12)
    assert expected_qber(DeviceParams(e_detector=0.0, y0=0.0), 0.05, 0.31) == 0.0
    # mpmath: 4.50962508559558e-2
    assert expected_qber(PAPER, ETA_124, 0.31) == pytest.approx(4.508e-2, abs=1e-4)


def test_predict_stats_perfect_apparatus():
    pred = predict_stats(PERFECT, ChannelPoint(0), IntensitySet(0.31, 0.13))
    assert all(y == 1.0 for y in pred.y_n[1:])
    assert all(e == 0.0 for e in pred.e_n[1:])
    assert len(pred.y_n) == 11


def test_single_photon_yield():
    pred = predict_stats(PAPER, ChannelPoint(1.24), IntensitySet())
    # y1 = Y0 + eta exactly
    assert pred.y_n[1] == pytest.approx(5.4121e-2, abs=1e-5)


def test_vacuum_consistency():
    eta = overall_transmission(PAPER, ChannelPoint(3.0))
    assert expected_gain(PAPER, eta, 0.0) == PAPER.y0
    assert expected_qber(PAPER, eta, 0.0) == PAPER.e0


@pytest.mark.parametrize("loss", [0.0, 5.0, 20.0])
def test_yields_increase_with_photon_number(loss):
    pred = predict_stats(PAPER, ChannelPoint(loss), IntensitySet())
    assert np.all(np.diff(pred.y_n) > 0)


def test_gain_linear_limit():
    for eta_mu in (1e-4, 1e-3, 9e-3):
        q = expected_gain(PAPER, eta_mu / 0.2, 0.2)
        assert q == pytest.approx(PAPER.y0 + eta_mu, rel=0.01)


def test_infinite_decoy_rate_signs_and_monotone():
    assert infinite_decoy_rate(PERFECT, ChannelPoint(0), 0.31) > 0
    rates = [infinite_decoy_rate(PAPER, ChannelPoint(x), 0.31) for x in np.arange(0, 20.5, 0.5)]
    assert all(a >= b for a, b in zip(rates, rates[1:]))


def test_true_q12_from_photon_yields():
    point = ChannelPoint(3.26)
    pred = predict_stats(PAPER, point, IntensitySet())
    mu = 0.31
    q12, _ = true_q12_e12(PAPER, point, mu)
    assert q12 == pytest.approx((pred.y_n[1] * mu + pred.y_n[2] * mu**2 / 2) * np.exp(-mu), rel=1e-14)


@pytest.mark.parametrize("loss", [1.24, 3.26, 5.23, 6.50, 8.38, 9.46, 11.01])
@pytest.mark.parametrize("mu, nu", [(0.31, 0.13), (0.5, 0.05), (0.2, 0.19)])
def test_bound_never_beats_exact_knowledge(loss, mu, nu):
    point = ChannelPoint(loss)
    intensities = IntensitySet(mu, nu)
    stats = predict_stats(PAPER, point, intensities).as_measured()
    bounds = analyze(stats, intensities, PAPER)
    q12, e12 = true_q12_e12(PAPER, point, mu)
    assert bounds.q12_l <= q12 + 1e-12
    assert bounds.eps12_u >= e12 - 1e-12
    assert weak_vacuum_rate(PAPER, point, intensities) <= infinite_decoy_rate(PAPER, point, mu) + 1e-12
