"""Weak+vacuum decoy-state bounds for LM05.

The pipeline turns one row of observed statistics (signal gain/QBER, decoy
gain, vacuum yield) into lower bounds on the single-photon yield, the combined
single+double photon yield, the effective gain, an upper bound on the
effective error rate, and finally a lower bound on the secure key rate.

Each public step clamps its output to the physical range by default. The
``clamp=False`` forms return the raw algebraic value so that :func:`analyze`
can record whether clamping happened.
"""

from __future__ import annotations

import math

from .core import (
    BoundsResult,
    DeviceParams,
    DomainError,
    InsecurePointError,
    IntensitySet,
    MeasuredStats,
    binary_entropy,
    tau,
)


def _clip(value: float, lo: float, hi: float) -> float:
    return min(max(value, lo), hi)


def y1_lower(stats: MeasuredStats, intensities: IntensitySet, *, clamp: bool = True) -> float:
    """Lower bound on the single-photon yield from the weak and vacuum decoys."""
    mu, nu = intensities.mu, intensities.nu
    denom = mu * nu - nu * nu
    if denom <= 0.0:
        raise DomainError(f"mu*nu - nu^2 must be positive (mu={mu}, nu={nu})")
    value = (mu / denom) * (
        stats.q_nu * math.exp(nu)
        - stats.q_mu * math.exp(mu) * nu * nu / (mu * mu)
        - (mu * mu - nu * nu) / (mu * mu) * stats.y0
    )
    return _clip(value, 0.0, 1.0) if clamp else value


def y12_lower(
    stats: MeasuredStats, intensities: IntensitySet, y1_l: float, *, clamp: bool = True
) -> float:
    """Lower bound on Y1 + Y2 given an already-computed ``y1_l``."""
    mu, nu = intensities.mu, intensities.nu
    denom = mu**3 * (nu - 0.5 * nu**3 / mu)
    if denom <= 0.0:
        raise DomainError(f"combined-yield denominator must be positive (mu={mu}, nu={nu})")
    num = (
        mu**3 * math.exp(nu) * stats.q_nu
        - nu**3 * stats.q_mu * math.exp(mu)
        - (mu**3 - nu**3) * stats.y0
        + (nu**3 * mu - 0.5 * nu**3 * mu**2) * y1_l
    )
    value = num / denom
    # Y1 + Y2 can never be smaller than Y1 alone.
    return _clip(value, y1_l, 1.0) if clamp else value


def q12_lower(y12_l: float, y1_l: float, mu: float, *, clamp: bool = True) -> float:
    """Lower bound on the gain contributed by one- and two-photon pulses."""
    if not mu > 0.0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    value = (0.5 * y12_l * mu**2 + (y1_l * mu - 0.5 * y1_l * mu**2)) * math.exp(-mu)
    return _clip(value, 0.0, 1.0) if clamp else value


def eps12_upper(
    stats: MeasuredStats, q12_l: float, mu: float, e0: float = 0.5, *, clamp: bool = True
) -> float:
    """Upper bound on the error rate of the one- and two-photon contribution.

    Raises :class:`InsecurePointError` when ``q12_l <= 0``.
    """
    if not q12_l > 0.0:
        raise InsecurePointError(f"effective gain bound is {q12_l!r}; no secure key")
    value = (stats.e_mu * stats.q_mu - e0 * stats.y0 * math.exp(-mu)) / q12_l
    return _clip(value, 0.0, 1.0) if clamp else value


def key_rate_lower(
    stats: MeasuredStats, q12_l: float, eps12_u: float, params: DeviceParams
) -> float:
    """Secure key rate per pulse; negative means no key at this point."""
    leak = stats.q_mu * params.f_ec * binary_entropy(stats.e_mu)
    return -leak + q12_l * (1.0 - tau(eps12_u))


def analyze(
    stats: MeasuredStats, intensities: IntensitySet, params: DeviceParams
) -> BoundsResult:
    """Run the full bound chain on one row of statistics."""
    mu = intensities.mu
    clamped = False

    raw = y1_lower(stats, intensities, clamp=False)
    y1_l = _clip(raw, 0.0, 1.0)
    clamped |= y1_l != raw

    raw = y12_lower(stats, intensities, y1_l, clamp=False)
    y12_l = _clip(raw, y1_l, 1.0)
    clamped |= y12_l != raw

    raw = q12_lower(y12_l, y1_l, mu, clamp=False)
    q12_l = _clip(raw, 0.0, 1.0)
    clamped |= q12_l != raw

    try:
        raw = eps12_upper(stats, q12_l, mu, params.e0, clamp=False)
    except InsecurePointError:
        r_l = key_rate_lower(stats, 0.0, 1.0, params)
        return BoundsResult(y1_l, y12_l, q12_l, 1.0, r_l, clamped=clamped, insecure=True)
    eps12_u = _clip(raw, 0.0, 1.0)
    clamped |= eps12_u != raw

    r_l = key_rate_lower(stats, q12_l, eps12_u, params)
    return BoundsResult(y1_l, y12_l, q12_l, eps12_u, r_l, clamped=clamped)
