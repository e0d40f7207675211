"""Forward model: expected statistics from device parameters and channel loss.

Uses the usual asymptotic weak-coherent-pulse model: a pulse of mean photon
number ``m`` is detected with probability ``Y0 + 1 - exp(-eta*m)`` and an
``n``-photon pulse with probability ``Y0 + 1 - (1-eta)**n``.  The loss in dB is
the total attenuation between preparation and detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import analyze
from .core import (
    ChannelPoint,
    DeviceParams,
    DomainError,
    IntensitySet,
    MeasuredStats,
    binary_entropy,
    tau,
)

N_MAX = 10


@dataclass(frozen=True)
class PredictedStats:
    q_mu: float
    e_mu: float
    q_nu: float
    e_nu: float
    y0: float
    y_n: tuple[float, ...]
    e_n: tuple[float, ...]

    def as_measured(self) -> MeasuredStats:
        return MeasuredStats(self.q_mu, self.e_mu, self.q_nu, self.e_nu, self.y0)


def overall_transmission(params: DeviceParams, channel: ChannelPoint) -> float:
    return params.eta_bob * channel.transmittance


def expected_gain(params: DeviceParams, eta: float, intensity: float) -> float:
    # -expm1 keeps precision when eta*intensity is tiny
    return params.y0 - math.expm1(-eta * intensity)


def expected_qber(params: DeviceParams, eta: float, intensity: float) -> float:
    q = expected_gain(params, eta, intensity)
    if q <= 0.0:
        raise DomainError("expected gain is zero; QBER undefined")
    return (params.e0 * params.y0 - params.e_detector * math.expm1(-eta * intensity)) / q


def photon_yield(params: DeviceParams, eta: float, n: int) -> float:
    return params.y0 + 1.0 - (1.0 - eta) ** n


def photon_error(params: DeviceParams, eta: float, n: int) -> float:
    y = photon_yield(params, eta, n)
    if y <= 0.0:
        raise DomainError(f"yield of the {n}-photon component is zero")
    return (params.e0 * params.y0 + params.e_detector * (1.0 - (1.0 - eta) ** n)) / y


def predict_stats(
    params: DeviceParams,
    channel: ChannelPoint,
    intensities: IntensitySet,
    n_max: int = N_MAX,
) -> PredictedStats:
    eta = overall_transmission(params, channel)
    ns = range(n_max + 1)
    y_n = tuple(photon_yield(params, eta, n) for n in ns)
    e_n = tuple(photon_error(params, eta, n) if y_n[n] > 0 else math.nan for n in ns)
    return PredictedStats(
        q_mu=expected_gain(params, eta, intensities.mu),
        e_mu=expected_qber(params, eta, intensities.mu),
        q_nu=expected_gain(params, eta, intensities.nu),
        e_nu=expected_qber(params, eta, intensities.nu),
        y0=params.y0,
        y_n=y_n,
        e_n=e_n,
    )


def true_q12_e12(params: DeviceParams, channel: ChannelPoint, mu: float) -> tuple[float, float]:
    """Exact gain and error rate of the one- and two-photon part of a signal pulse."""
    eta = overall_transmission(params, channel)
    y1, y2 = photon_yield(params, eta, 1), photon_yield(params, eta, 2)
    e1, e2 = photon_error(params, eta, 1), photon_error(params, eta, 2)
    w = math.exp(-mu)
    q12 = (y1 * mu + y2 * mu * mu / 2.0) * w
    e12 = (e1 * y1 * mu + e2 * y2 * mu * mu / 2.0) * w / q12
    return q12, e12


def infinite_decoy_rate(params: DeviceParams, channel: ChannelPoint, mu: float) -> float:
    """Key rate when the one- and two-photon yields and errors are known exactly."""
    if not mu > 0.0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    eta = overall_transmission(params, channel)
    q_mu = expected_gain(params, eta, mu)
    e_mu = expected_qber(params, eta, mu)
    q12, e12 = true_q12_e12(params, channel, mu)
    return -q_mu * params.f_ec * binary_entropy(e_mu) + q12 * (1.0 - tau(e12))


def weak_vacuum_rate(
    params: DeviceParams, channel: ChannelPoint, intensities: IntensitySet
) -> float:
    """Bounded key rate obtained by feeding predicted statistics to :func:`analyze`."""
    stats = predict_stats(params, channel, intensities).as_measured()
    return analyze(stats, intensities, params).r_l
