"""Domain types and scalar functions shared across the package."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass


class DomainError(ValueError):
    """An input lies outside the range where a quantity is defined."""


class InsufficientDataError(ValueError):
    """A statistic cannot be estimated from the available counts."""


class InsecurePointError(ArithmeticError):
    """The effective-gain bound is vacuous, so no secure key can be certified."""


def _check_prob(name: str, value: float, *, allow_nan: bool = False) -> None:
    if allow_nan and math.isnan(value):
        return
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class DeviceParams:
    """Intrinsic setup parameters.

    ``eta_bob`` is the internal transmittance including detector efficiency,
    ``e_detector`` the probability that a photon-triggered click is wrong,
    ``y0`` the background yield per pulse, ``e0`` the error probability of a
    background-only click and ``f_ec`` the error-correction inefficiency.
    """

    eta_bob: float = 0.072
    e_detector: float = 0.045
    y0: float = 3.52e-6
    e0: float = 0.5
    f_ec: float = 1.22

    def __post_init__(self) -> None:
        if not 0.0 < self.eta_bob <= 1.0:
            raise DomainError(f"eta_bob must lie in (0, 1], got {self.eta_bob!r}")
        # 0.5 itself is admitted so a fully random detector can be analysed
        # (and found insecure) instead of rejected.
        if not 0.0 <= self.e_detector <= 0.5:
            raise DomainError(f"e_detector must lie in [0, 0.5], got {self.e_detector!r}")
        if not 0.0 <= self.y0 < 1.0:
            raise DomainError(f"y0 must lie in [0, 1), got {self.y0!r}")
        _check_prob("e0", self.e0)
        if not self.f_ec >= 1.0:
            raise DomainError(f"f_ec must be >= 1, got {self.f_ec!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class IntensitySet:
    """Signal (``mu``) and weak decoy (``nu``) mean photon numbers."""

    mu: float = 0.31
    nu: float = 0.13

    def __post_init__(self) -> None:
        if not 0.0 < self.nu < self.mu:
            raise DomainError(f"need 0 < nu < mu, got mu={self.mu!r}, nu={self.nu!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ChannelPoint:
    loss_db: float

    def __post_init__(self) -> None:
        if not self.loss_db >= 0.0:
            raise DomainError(f"loss_db must be >= 0, got {self.loss_db!r}")

    @property
    def transmittance(self) -> float:
        return db_to_transmittance(self.loss_db)


@dataclass(frozen=True)
class MeasuredStats:
    """Observed gains and QBERs at one channel point.

    QBER fields may be NaN when the corresponding class registered no clicks.
    """

    q_mu: float
    e_mu: float
    q_nu: float
    e_nu: float
    y0: float

    def __post_init__(self) -> None:
        for name in ("q_mu", "q_nu", "y0"):
            _check_prob(name, getattr(self, name))
        for name in ("e_mu", "e_nu"):
            _check_prob(name, getattr(self, name), allow_nan=True)
        if self.q_mu < self.y0:
            raise DomainError(f"q_mu ({self.q_mu!r}) is below the background yield y0 ({self.y0!r})")
        if self.q_nu < self.y0:
            raise DomainError(f"q_nu ({self.q_nu!r}) is below the background yield y0 ({self.y0!r})")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BoundsResult:
    """Decoy-state bounds derived from one :class:`MeasuredStats` row.

    ``insecure`` is set when the effective-gain bound is zero; ``eps12_u`` is
    then reported as 1 and ``r_l`` carries only the error-correction cost.
    """

    y1_l: float
    y12_l: float
    q12_l: float
    eps12_u: float
    r_l: float
    clamped: bool = False
    insecure: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def binary_entropy(e: float) -> float:
    """Binary Shannon entropy in bits, with H(0) = H(1) = 0."""
    _check_prob("e", e)
    if e == 0.0 or e == 1.0:
        return 0.0
    return -e * math.log2(e) - (1.0 - e) * math.log2(1.0 - e)


def tau(e1: float) -> float:
    """Privacy-amplification cost for the effective error rate ``e1``."""
    _check_prob("e1", e1)
    if e1 >= 0.5:
        return 1.0
    return math.log2(1.0 + 4.0 * e1 - 4.0 * e1 * e1)


def db_to_transmittance(loss_db: float) -> float:
    if not loss_db >= 0.0:
        raise DomainError(f"loss must be >= 0 dB, got {loss_db!r}")
    return 10.0 ** (-loss_db / 10.0)
