"""Pulse-level Monte Carlo of LM05 with weak+vacuum decoy states.

Each pulse is assigned a class (signal, weak decoy or vacuum) and a mode
(encoding or control).  Its photon number is drawn from a Poisson distribution,
thinned by the overall transmission, and combined with an independent
background event to decide whether Bob clicks.  Alice encodes a uniform bit by
flipping or not flipping the qubit; Bob decodes it with an error probability
that depends on whether the click was photon- or background-triggered.

The pulse stream is cut into fixed-size blocks. Block ``k`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(k,))`` so the merged
tallies do not depend on how many workers ran the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import overall_transmission
from .core import (
    ChannelPoint,
    DeviceParams,
    DomainError,
    InsufficientDataError,
    IntensitySet,
    MeasuredStats,
)

SIGNAL, WEAK, VACUUM = 0, 1, 2
CLASS_NAMES = ("signal", "weak", "vacuum")
KEY, CONTROL = 0, 1
MODE_NAMES = ("key", "control")

# Photon numbers above this share the last tag bin.
MAX_TAG = 15
DEFAULT_BLOCK_SIZE = 1 << 20
DEFAULT_PULSES = 140_000_000
PULSE_RATE_HZ = 7.25e5


@dataclass(frozen=True)
class MCConfig:
    params: DeviceParams
    channel: ChannelPoint
    intensities: IntensitySet
    n_pulses: int = DEFAULT_PULSES
    seed: int = 0
    # weak : vacuum : signal = 1 : 1 : 2
    class_probs: tuple[float, float, float] = (0.5, 0.25, 0.25)
    control_mode_prob: float = 0.5
    pulse_rate_hz: float = PULSE_RATE_HZ
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if int(self.n_pulses) != self.n_pulses or self.n_pulses < 1:
            raise DomainError(f"n_pulses must be a positive integer, got {self.n_pulses!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if len(self.class_probs) != 3 or any(p < 0 for p in self.class_probs):
            raise DomainError(f"class_probs must be three non-negative numbers, got {self.class_probs!r}")
        if not math.isclose(sum(self.class_probs), 1.0, abs_tol=1e-12):
            raise DomainError(f"class_probs must sum to 1, got {sum(self.class_probs)!r}")
        if not 0.0 <= self.control_mode_prob < 1.0:
            raise DomainError(f"control_mode_prob must lie in [0, 1), got {self.control_mode_prob!r}")
        if self.block_size < 1:
            raise DomainError("block_size must be positive")

    def to_dict(self) -> dict:
        return {
            "n_pulses": int(self.n_pulses),
            "seed": int(self.seed),
            "class_probs": list(self.class_probs),
            "control_mode_prob": self.control_mode_prob,
            "pulse_rate_hz": self.pulse_rate_hz,
            "block_size": self.block_size,
            "loss_db": self.channel.loss_db,
            "params": self.params.to_dict(),
            "intensities": self.intensities.to_dict(),
        }


def _zeros() -> np.ndarray:
    return np.zeros((2, 3, MAX_TAG + 1), dtype=np.int64)


@dataclass
class TallySet:
    """Counters indexed by ``[mode, class, photon number]``.

    The photon-number axis is the ground-truth tag only the simulator knows.
    Per-class totals are sums over that axis.
    """

    sent: np.ndarray = field(default_factory=_zeros)
    clicks: np.ndarray = field(default_factory=_zeros)
    errors: np.ndarray = field(default_factory=_zeros)

    def merge(self, other: TallySet) -> TallySet:
        return TallySet(self.sent + other.sent, self.clicks + other.clicks, self.errors + other.errors)

    __add__ = merge

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TallySet):
            return NotImplemented
        return all(
            np.array_equal(a, b)
            for a, b in ((self.sent, other.sent), (self.clicks, other.clicks), (self.errors, other.errors))
        )

    def pulses_sent(self, cls: int, mode: int = KEY) -> int:
        return int(self.sent[mode, cls].sum())

    def class_clicks(self, cls: int, mode: int = KEY) -> int:
        return int(self.clicks[mode, cls].sum())

    def bit_errors(self, cls: int, mode: int = KEY) -> int:
        return int(self.errors[mode, cls].sum())

    @property
    def total_pulses(self) -> int:
        return int(self.sent.sum())

    def to_dict(self) -> dict:
        out: dict = {}
        for m, mode in enumerate(MODE_NAMES):
            out[mode] = {
                name: {
                    "pulses_sent": self.pulses_sent(c, m),
                    "clicks": self.class_clicks(c, m),
                    "bit_errors": self.bit_errors(c, m),
                    "sent_n": self.sent[m, c].tolist(),
                    "clicks_n": self.clicks[m, c].tolist(),
                    "errors_n": self.errors[m, c].tolist(),
                }
                for c, name in enumerate(CLASS_NAMES)
            }
        return out


def _block_tally(config: MCConfig, block: int, size: int) -> TallySet:
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(block,)))
    params = config.params
    eta = overall_transmission(params, config.channel)
    means = np.array([config.intensities.mu, config.intensities.nu, 0.0])
    edges = np.cumsum(config.class_probs)[:2]

    cls = np.searchsorted(edges, rng.random(size), side="right").astype(np.int8)
    mode = (rng.random(size) < config.control_mode_prob).astype(np.int8)
    photons = rng.poisson(means[cls])
    background = rng.random(size) < params.y0

    # Only pulses that emitted light can deliver a photon to Bob.
    lit = np.flatnonzero(photons)
    arrived = np.zeros(size, dtype=bool)
    arrived[lit] = rng.binomial(photons[lit], eta) > 0
    click = arrived | background

    idx = np.flatnonzero(click)
    alice_bit = rng.integers(0, 2, idx.size, dtype=np.int8)
    p_err = np.where(arrived[idx], params.e_detector, params.e0)
    bob_bit = alice_bit ^ (rng.random(idx.size) < p_err).astype(np.int8)
    wrong = bob_bit != alice_bit

    tag = np.minimum(photons, MAX_TAG)
    nbins = 2 * 3 * (MAX_TAG + 1)
    flat = (mode.astype(np.int64) * 3 + cls) * (MAX_TAG + 1) + tag
    shape = (2, 3, MAX_TAG + 1)
    return TallySet(
        sent=np.bincount(flat, minlength=nbins).reshape(shape),
        clicks=np.bincount(flat[idx], minlength=nbins).reshape(shape),
        errors=np.bincount(flat[idx[wrong]], minlength=nbins).reshape(shape),
    )


def _run_blocks(config: MCConfig, blocks: list[tuple[int, int]]) -> TallySet:
    total = TallySet()
    for block, size in blocks:
        total = total + _block_tally(config, block, size)
    return total


def block_plan(n_pulses: int, block_size: int) -> list[tuple[int, int]]:
    full, rest = divmod(n_pulses, block_size)
    plan = [(k, block_size) for k in range(full)]
    if rest:
        plan.append((full, rest))
    return plan


def simulate_run(config: MCConfig, workers: int = 1) -> TallySet:
    """Simulate ``config.n_pulses`` pulses and return the merged tallies.

    The result is identical for every value of ``workers``.
    """
    plan = block_plan(int(config.n_pulses), config.block_size)
    if workers <= 1 or len(plan) == 1:
        return _run_blocks(config, plan)
    chunks = [plan[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_blocks, [config] * len(chunks), chunks))
    total = TallySet()
    for part in parts:
        total = total + part
    return total


def estimate_stats(tallies: TallySet) -> MeasuredStats:
    """Ratio estimators over the encoding-mode pulses of each class.

    A class with no clicks gets a NaN QBER.
    """
    for c, name in enumerate(CLASS_NAMES):
        if tallies.pulses_sent(c) == 0:
            raise InsufficientDataError(f"no {name} pulses were sent in encoding mode")

    def gain(c: int) -> float:
        return tallies.class_clicks(c) / tallies.pulses_sent(c)

    def qber(c: int) -> float:
        clicks = tallies.class_clicks(c)
        return tallies.bit_errors(c) / clicks if clicks else math.nan

    return MeasuredStats(
        q_mu=gain(SIGNAL), e_mu=qber(SIGNAL), q_nu=gain(WEAK), e_nu=qber(WEAK), y0=gain(VACUUM)
    )


def true_tagged_stats(tallies: TallySet) -> tuple[float, float]:
    """Ground-truth gain and error rate of one- and two-photon signal pulses."""
    sent = tallies.pulses_sent(SIGNAL)
    clicks12 = int(tallies.clicks[KEY, SIGNAL, 1:3].sum())
    errors12 = int(tallies.errors[KEY, SIGNAL, 1:3].sum())
    if sent == 0 or clicks12 == 0:
        raise InsufficientDataError("no clicks from one- or two-photon signal pulses")
    return clicks12 / sent, errors12 / clicks12
