import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .game import InvalidArgumentError

logger = logging.getLogger(__name__)

SIMPLEX_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SesaConfig:
    max_steps: int = 10_000
    # Steps still recorded once every player is satisfied.
    tail: int = 10
    # Constant learning rate; None means 1 / (t + 1).
    learning_rate: float | None = None

    def __post_init__(self):
        if self.max_steps < 1:
            raise InvalidArgumentError("max_steps must be at least 1")
        if self.tail < 0:
            raise InvalidArgumentError("tail must be nonnegative")
        if self.learning_rate is not None and not 0.0 <= self.learning_rate <= 1.0:
            raise InvalidArgumentError("learning_rate must lie in [0, 1]")


@dataclass(frozen=True)
class SesaState:
    t: int
    distributions: tuple
    actions: tuple
    utilities: np.ndarray
    satisfied: tuple

    @property
    def all_satisfied(self):
        return all(self.satisfied)


@dataclass(frozen=True)
class SesaTrace:
    profiles: list
    utilities: np.ndarray
    satisfied: np.ndarray
    converged_at: int | None
    final_state: SesaState

    @property
    def converged(self):
        return self.converged_at is not None

    @property
    def steps(self):
        return len(self.profiles)

    @property
    def terminal_profile(self):
        return self.profiles[-1]


def run_stream(base_seed, run_index):
    return np.random.default_rng([base_seed, run_index])


def check_distribution(pi, num_actions):
    pi = np.array(pi, dtype=float)
    if pi.shape != (num_actions,):
        raise InvalidArgumentError(
            f"distribution has {pi.size} entries, expected {num_actions}"
        )
    if np.any(pi < 0) or abs(pi.sum() - 1.0) > SIMPLEX_TOLERANCE:
        raise InvalidArgumentError(f"not a probability vector: {pi.tolist()}")
    return pi


def sample_action(rng, pi):
    cumulative = np.cumsum(pi)
    index = np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right")
    return int(min(index, len(pi) - 1))


def normalized_gain(game, k, u_hat):
    """b = (M_k + u_hat - Γ_k) / (2 M_k), which lies in [0, 1]."""
    cap = float(game.caps[k])
    threshold = float(game.thresholds[k])
    if cap <= 0:
        raise InvalidArgumentError(f"utility cap of player {k} must be positive")
    if not 0.0 <= threshold <= cap:
        raise InvalidArgumentError(
            f"threshold {threshold} of player {k} outside [0, {cap}]"
        )
    if not 0.0 <= u_hat <= cap:
        raise InvalidArgumentError(
            f"observed utility {u_hat} of player {k} outside [0, {cap}]"
        )
    return (cap + u_hat - threshold) / (2.0 * cap)


def update_distribution(pi, played, b, learning_rate):
    """Move probability mass towards `played` by a step of learning_rate * b."""
    if not 0.0 <= b <= 1.0 or not 0.0 <= learning_rate <= 1.0:
        raise InvalidArgumentError(
            f"gain {b} and learning rate {learning_rate} must lie in [0, 1]"
        )
    step = learning_rate * b
    updated = np.asarray(pi, dtype=float) * (1.0 - step)
    updated[played] += step
    updated /= updated.sum()
    return updated


def _observe(game, actions):
    utilities = game.utilities(actions)
    satisfied = tuple(
        bool(utilities[k] >= game.thresholds[k]) for k in range(game.num_players)
    )
    return utilities, satisfied


def sesa_init(game, rng, initial_distributions=None):
    if initial_distributions is None:
        initial_distributions = [np.full(n, 1.0 / n) for n in game.action_counts]
    if len(initial_distributions) != game.num_players:
        raise InvalidArgumentError(
            f"expected {game.num_players} initial distributions"
        )
    distributions = tuple(
        check_distribution(pi, n)
        for pi, n in zip(initial_distributions, game.action_counts)
    )
    actions = tuple(sample_action(rng, pi) for pi in distributions)
    utilities, satisfied = _observe(game, actions)
    return SesaState(0, distributions, actions, utilities, satisfied)


def sesa_step(game, state, rng, learning_rate=None):
    """
    One round of the search. Satisfied players keep their action and
    distribution. Every unsatisfied player reinforces the action it just
    played by the normalized gain of the utility it observed, then draws a
    new action from the updated distribution. Draws follow player order.
    """
    t = state.t + 1
    rate = 1.0 / (t + 1) if learning_rate is None else learning_rate
    distributions = list(state.distributions)
    actions = list(state.actions)
    for k in range(game.num_players):
        if state.satisfied[k]:
            continue
        b = normalized_gain(game, k, float(state.utilities[k]))
        distributions[k] = update_distribution(distributions[k], actions[k], b, rate)
        actions[k] = sample_action(rng, distributions[k])
    if state.all_satisfied:
        utilities, satisfied = state.utilities, state.satisfied
    else:
        utilities, satisfied = _observe(game, tuple(actions))
    return SesaState(t, tuple(distributions), tuple(actions), utilities, satisfied)


def check_thresholds(game):
    for k in range(game.num_players):
        if not 0.0 <= game.thresholds[k] <= game.caps[k]:
            raise InvalidArgumentError(
                f"threshold of player {k} must lie in [0, {game.caps[k]}]"
            )


def run_sesa(game, rng, config=SesaConfig(), initial_distributions=None):
    """
    Iterate sesa_step until every player is satisfied or max_steps is reached.
    Satisfaction is absorbing, so the first step where all players are
    satisfied is the convergence time; `config.tail` further steps are kept.
    """
    check_thresholds(game)
    state = sesa_init(game, rng, initial_distributions)
    profiles = [state.actions]
    utilities = [state.utilities]
    satisfied = [state.satisfied]
    converged_at = 0 if state.all_satisfied else None

    while state.t < config.max_steps:
        if converged_at is not None and state.t >= converged_at + config.tail:
            break
        state = sesa_step(game, state, rng, config.learning_rate)
        profiles.append(state.actions)
        utilities.append(state.utilities)
        satisfied.append(state.satisfied)
        if converged_at is None and state.all_satisfied:
            converged_at = state.t

    if converged_at is None:
        logger.debug("SESA run ended unconverged at %s", state.actions)
    else:
        logger.debug("SESA converged at t=%d on %s", converged_at, state.actions)
    return SesaTrace(
        profiles=profiles,
        utilities=np.array(utilities),
        satisfied=np.array(satisfied, dtype=bool),
        converged_at=converged_at,
        final_state=state,
    )


def _run_one(game, base_seed, run_index, config):
    return run_sesa(game, run_stream(base_seed, run_index), config)


def run_many(game, runs, base_seed, config=SesaConfig(), workers=1):
    """Independent runs, returned in run order whatever the worker count."""
    if runs < 1:
        raise InvalidArgumentError("runs must be at least 1")
    check_thresholds(game)
    indices = range(runs)
    if workers <= 1:
        return [_run_one(game, base_seed, i, config) for i in indices]
    logger.info("Running %d SESA runs on %d workers", runs, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(
                _run_one,
                [game] * runs,
                [base_seed] * runs,
                indices,
                [config] * runs,
            )
        )
