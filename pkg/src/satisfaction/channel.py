import logging
from dataclasses import dataclass

import numpy as np

from .equilibria import CostModel
from .game import ConstrainedGame, InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InterferenceChannel:
    """
    K transmitter-receiver pairs sharing a band.

    gain_sq[k, j] is the squared magnitude of the gain from transmitter j to
    receiver k; noise holds the receiver noise powers and p_max the power
    budgets, both in watts. Every link chooses among `levels` power levels.
    """

    gain_sq: np.ndarray
    noise: np.ndarray
    p_max: np.ndarray
    levels: int

    def __post_init__(self):
        gain_sq = np.asarray(self.gain_sq, dtype=float)
        noise = np.asarray(self.noise, dtype=float)
        p_max = np.asarray(self.p_max, dtype=float)
        num_links = len(noise)
        if gain_sq.shape != (num_links, num_links):
            raise InvalidArgumentError(
                f"gain_sq must be {num_links}x{num_links}, got {gain_sq.shape}"
            )
        if not np.all(np.isfinite(gain_sq)) or np.any(gain_sq < 0):
            raise InvalidArgumentError("gains must be finite and nonnegative")
        if p_max.shape != noise.shape:
            raise InvalidArgumentError("noise and p_max need one entry per link")
        if not (np.all(np.isfinite(noise)) and np.all(np.isfinite(p_max))):
            raise InvalidArgumentError("noise and p_max must be finite")
        if np.any(noise <= 0) or np.any(p_max <= 0):
            raise InvalidArgumentError("noise and p_max must be positive per link")
        if self.levels < 2:
            raise InvalidArgumentError("a power grid needs at least 2 levels")
        object.__setattr__(self, "gain_sq", gain_sq)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "p_max", p_max)

    @property
    def num_links(self):
        return len(self.noise)

    def grid(self, k):
        return power_grid(self.p_max[k], self.levels)


def power_grid(p_max, n_levels):
    """Log-spaced levels p_max * N^(-n/(N-1)), n = 0..N-1, in descending order."""
    if n_levels < 2:
        raise InvalidArgumentError(f"n_levels must be at least 2, got {n_levels}")
    if p_max <= 0:
        raise InvalidArgumentError(f"p_max must be positive, got {p_max}")
    exponents = -np.arange(n_levels) / (n_levels - 1)
    powers = p_max * np.power(float(n_levels), exponents)
    powers[0] = p_max
    powers[-1] = p_max / n_levels
    return powers


def rate_utility(ch, powers):
    """Shannon rates log2(1 + SINR_k) in bits per channel use."""
    powers = np.asarray(powers, dtype=float)
    if powers.shape != (ch.num_links,):
        raise InvalidArgumentError(
            f"expected {ch.num_links} powers, got shape {powers.shape}"
        )
    if np.any(powers < 0):
        raise InvalidArgumentError(f"powers must be nonnegative: {powers.tolist()}")
    direct = np.diag(ch.gain_sq)
    signal = powers * direct
    cross = ch.gain_sq * (1.0 - np.eye(ch.num_links))
    interference = cross @ powers
    return np.log2(1.0 + signal / (ch.noise + interference))


def single_user_cap(ch, k):
    """Rate of link k at full power with every other link silent."""
    if not 0 <= k < ch.num_links:
        raise InvalidArgumentError(f"link index {k} out of range")
    return float(np.log2(1.0 + ch.p_max[k] * ch.gain_sq[k, k] / ch.noise[k]))


def sample_channel(rng, num_links, snr_db, n_levels):
    """
    Draw |h|^2 for every transmitter-receiver pair from a zero mean, unit
    variance circularly symmetric complex Gaussian. Power budgets are 1 W
    and the noise is set so that p_max / noise matches snr_db.
    """
    if num_links < 1:
        raise InvalidArgumentError("a channel needs at least one link")
    parts = rng.normal(0.0, np.sqrt(0.5), size=(num_links, num_links, 2))
    gain_sq = (parts**2).sum(axis=2)
    noise = np.full(num_links, 1.0 / 10.0 ** (snr_db / 10.0))
    return InterferenceChannel(
        gain_sq=gain_sq,
        noise=noise,
        p_max=np.ones(num_links),
        levels=n_levels,
    )


def power_cost(ch):
    """Normalized effort c_k(a) = power(a) / p_max,k."""
    return CostModel([ch.grid(k) / ch.p_max[k] for k in range(ch.num_links)])


def to_game(ch, gamma):
    gamma = [float(g) for g in gamma]
    if len(gamma) != ch.num_links:
        raise InvalidArgumentError(f"expected {ch.num_links} thresholds")
    if any(g < 0 for g in gamma):
        raise InvalidArgumentError(f"thresholds must be nonnegative: {gamma}")
    grids = [ch.grid(k) for k in range(ch.num_links)]

    def evaluate(profile):
        return rate_utility(
            ch, [grids[k][action] for k, action in enumerate(profile)]
        )

    caps = [single_user_cap(ch, k) for k in range(ch.num_links)]
    for k, (threshold, cap) in enumerate(zip(gamma, caps)):
        if threshold > cap:
            logger.warning(
                "Link %d requires %.4f bps but can reach at most %.4f bps",
                k,
                threshold,
                cap,
            )
    game = ConstrainedGame(
        [ch.levels] * ch.num_links,
        gamma,
        caps,
        evaluate,
        action_values=grids,
    )
    return game, power_cost(ch)


def channel_to_document(ch, seed=None):
    document = {
        "k": ch.num_links,
        "gain_sq": ch.gain_sq.tolist(),
        "noise": ch.noise.tolist(),
        "p_max": ch.p_max.tolist(),
        "levels": ch.levels,
    }
    if seed is not None:
        document["seed"] = seed
    return document
