"""Intensity optimisation and maximum-secure-loss search."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, Literal

from .channel import infinite_decoy_rate, weak_vacuum_rate
from .core import ChannelPoint, DeviceParams, DomainError, IntensitySet

RateKind = Literal["weak-vacuum", "infinite", "infinite-optimal"]

# Grids are walked in integer steps to keep the visited points exact.
COARSE = 100
FINE = 1000
MAX_SCAN_DB = 100.0
SCAN_STEP_DB = 0.5


class InsecureError(RuntimeError):
    """No secure key rate exists where one was required."""


@dataclass(frozen=True)
class PlanResult:
    best_mu: float
    best_nu: float
    best_rate: float
    evaluations: int
    secure: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def _wv_objective(params: DeviceParams, channel: ChannelPoint) -> Callable[[float, float], float]:
    def rate(mu: float, nu: float) -> float:
        return weak_vacuum_rate(params, channel, IntensitySet(mu, nu))

    return rate


def optimize_intensities(params: DeviceParams, channel: ChannelPoint) -> PlanResult:
    """Grid search for the (mu, nu) maximising the weak+vacuum key rate.

    Coarse pass on a 0.01 grid over ``mu`` in [0.01, 1] and ``nu`` in
    [0.01, mu - 0.01], then a 0.001 pass within one coarse step of the coarse
    optimum.  Ties go to the smaller ``mu``, then the smaller ``nu``.
    """
    objective = _wv_objective(params, channel)
    best: tuple[float, int, int] | None = None
    evaluations = 0

    def visit(i: int, j: int, scale: int) -> None:
        nonlocal best, evaluations
        # keys are compared on the fine grid so ties across passes resolve consistently
        fi, fj = i * FINE // scale, j * FINE // scale
        value = objective(fi / FINE, fj / FINE)
        evaluations += 1
        if best is None or value > best[0] or (value == best[0] and (fi, fj) < (best[1], best[2])):
            best = (value, fi, fj)

    for i in range(2, COARSE + 1):
        for j in range(1, i):
            visit(i, j, COARSE)

    assert best is not None
    _, ci, cj = best
    step = FINE // COARSE
    lowest = FINE // COARSE
    for i in range(max(lowest + 1, ci - step), min(FINE, ci + step) + 1):
        for j in range(max(lowest, cj - step), min(i - 1, cj + step) + 1):
            visit(i, j, FINE)

    value, fi, fj = best
    return PlanResult(fi / FINE, fj / FINE, value, evaluations, secure=value > 0.0)


def optimal_infinite_mu(params: DeviceParams, channel: ChannelPoint) -> tuple[float, float]:
    """Signal intensity maximising the infinite-decoy rate; returns (mu, rate)."""
    best = (float("-inf"), 0)
    for i in range(1, COARSE + 1):
        k = i * FINE // COARSE
        value = infinite_decoy_rate(params, channel, k / FINE)
        if value > best[0]:
            best = (value, k)
    step = FINE // COARSE
    centre = best[1]
    for k in range(max(1, centre - step), min(FINE, centre + step) + 1):
        value = infinite_decoy_rate(params, channel, k / FINE)
        if value > best[0] or (value == best[0] and k < best[1]):
            best = (value, k)
    return best[1] / FINE, best[0]


def rate_function(
    params: DeviceParams, intensities: IntensitySet, kind: RateKind
) -> Callable[[float], float]:
    """Key rate as a function of channel loss for the chosen model."""
    if kind == "weak-vacuum":
        return lambda loss: weak_vacuum_rate(params, ChannelPoint(loss), intensities)
    if kind == "infinite":
        return lambda loss: infinite_decoy_rate(params, ChannelPoint(loss), intensities.mu)
    if kind == "infinite-optimal":
        return lambda loss: optimal_infinite_mu(params, ChannelPoint(loss))[1]
    raise ValueError(f"unknown rate kind {kind!r}")


def max_secure_loss(
    params: DeviceParams, intensities: IntensitySet, kind: RateKind = "weak-vacuum"
) -> float:
    """Largest loss in dB, on a 0.01 dB grid, at which the key rate is positive.

    Scans upward in 0.5 dB steps until the rate stops being positive, then
    bisects the bracketing interval on the 0.01 dB grid.
    """
    rate = rate_function(params, intensities, kind)
    if not rate(0.0) > 0.0:
        raise InsecureError("key rate is not positive even at zero loss")

    hundredths = round(SCAN_STEP_DB * 100)
    lo, hi = 0, hundredths
    while rate(hi / 100) > 0.0:
        lo = hi
        hi += hundredths
        if hi > MAX_SCAN_DB * 100:
            raise DomainError(f"key rate still positive at {MAX_SCAN_DB} dB")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rate(mid / 100) > 0.0:
            lo = mid
        else:
            hi = mid
    return lo / 100
