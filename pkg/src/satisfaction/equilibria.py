import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .game import ConstrainedGame, InvalidArgumentError, with_action

logger = logging.getLogger(__name__)


class CostModel:
    """Per-player effort c_k(a) in [0, 1] for every action a of player k."""

    def __init__(self, costs):
        self._costs = tuple(np.asarray(row, dtype=float) for row in costs)
        for k, row in enumerate(self._costs):
            if row.ndim != 1 or len(row) == 0:
                raise InvalidArgumentError(f"costs of player {k} must be a list")
            if not np.all((row >= 0.0) & (row <= 1.0)):
                raise InvalidArgumentError(
                    f"costs of player {k} leave the range [0, 1]: {row.tolist()}"
                )

    @classmethod
    def uniform(cls, game, value=0.0):
        return cls([[value] * n for n in game.action_counts])

    @property
    def num_players(self):
        return len(self._costs)

    def cost(self, k, action):
        return float(self._costs[k][action])

    def costs(self, k):
        return self._costs[k]

    def as_lists(self):
        return [row.tolist() for row in self._costs]

    def scaled(self, factor):
        return CostModel([row * factor for row in self._costs])

    def check_game(self, game):
        if [len(row) for row in self._costs] != list(game.action_counts):
            raise InvalidArgumentError(
                "cost model does not match the game's action counts"
            )

    def profile_costs(self, k, action_counts):
        """c_k(s_k) broadcast over the whole profile space."""
        shape = [1] * len(action_counts)
        shape[k] = action_counts[k]
        return np.broadcast_to(self._costs[k].reshape(shape), action_counts)


@dataclass(frozen=True)
class EquilibriumReport:
    ne: frozenset
    gne: frozenset
    se: frozenset
    ese: frozenset
    clipping: tuple
    blocking_clipping: bool

    @property
    def feasible(self):
        return len(self.se) > 0


def _profiles_in(mask):
    return frozenset(tuple(int(a) for a in index) for index in np.argwhere(mask))


def enumerate_ne(game):
    table = game.table
    mask = np.ones(game.action_counts, dtype=bool)
    for k in range(game.num_players):
        mask &= table[k] >= table[k].max(axis=k, keepdims=True)
    return _profiles_in(mask)


def enumerate_gne(game):
    table = game.table
    mask = np.ones(game.action_counts, dtype=bool)
    for k in range(game.num_players):
        feasible = game.feasible_mask(k)
        best = np.where(feasible, table[k], -np.inf).max(axis=k, keepdims=True)
        mask &= feasible & (table[k] >= best)
    return _profiles_in(mask)


def enumerate_se(game):
    return _profiles_in(game.satisfied_mask())


def enumerate_ese(game, cost):
    cost.check_game(game)
    mask = game.satisfied_mask()
    for k in range(game.num_players):
        effort = cost.profile_costs(k, game.action_counts)
        least = np.where(game.feasible_mask(k), effort, np.inf).min(
            axis=k, keepdims=True
        )
        mask &= effort <= least
    return _profiles_in(mask)


def is_feasible(game):
    return bool(game.satisfied_mask().any())


def cost_game(game, cost):
    """Game where player k maximizes -c_k(s_k) under the constraints of `game`.

    Its generalized Nash equilibria are the efficient satisfaction equilibria
    of `game`.
    """
    cost.check_game(game)
    tables = np.stack(
        [
            -cost.profile_costs(k, game.action_counts)
            for k in range(game.num_players)
        ]
    )
    return ConstrainedGame.from_tables(
        tables,
        game.thresholds,
        game.caps,
        action_values=game.action_values,
        feasibility=[game.feasible_mask(k) for k in range(game.num_players)],
    )


def potential_of(cost, profile):
    """Sum of the players' efforts at `profile`, as an exact rational."""
    return sum(
        (Fraction(cost.cost(k, action)) for k, action in enumerate(profile)),
        Fraction(0),
    )


def verify_potential_identity(game, cost, phi):
    """
    Check c_k(a, s_-k) - c_k(b, s_-k) == phi(a, s_-k) - phi(b, s_-k) for every
    player k, every s_-k and every pair a, b in f_k(s_-k). Both sides are
    compared as exact rationals.
    """
    cost.check_game(game)
    for k in range(game.num_players):
        others = [range(n) for j, n in enumerate(game.action_counts) if j != k]
        for opponents in itertools.product(*others):
            profiles = [
                opponents[:k] + (action,) + opponents[k:]
                for action in range(game.action_counts[k])
            ]
            feasible = [p for p in profiles if game.is_feasible_action(k, p)]
            values = {p: Fraction(phi(p)) for p in feasible}
            for first, second in itertools.combinations(feasible, 2):
                effort = Fraction(cost.cost(k, first[k])) - Fraction(
                    cost.cost(k, second[k])
                )
                if effort != values[first] - values[second]:
                    logger.debug(
                        "Potential identity fails for player %d between %s and %s",
                        k,
                        first,
                        second,
                    )
                    return False
    return True


def find_clipping_actions(game):
    """Per player, the actions that satisfy it whatever the others play."""
    clipping = []
    for k in range(game.num_players):
        feasible = game.feasible_mask(k)
        clipping.append(
            frozenset(
                action
                for action in range(game.action_counts[k])
                if feasible.take(action, axis=k).all()
            )
        )
    return tuple(clipping)


def has_blocking_clipping(game):
    """
    True when some player k has a clipping action that leaves another player
    j with an empty feasible set against every remaining opponent profile.
    """
    for k, actions in enumerate(find_clipping_actions(game)):
        for action in sorted(actions):
            for j in range(game.num_players):
                if j == k:
                    continue
                if not game.feasible_mask(j).take(action, axis=k).any():
                    logger.debug(
                        "Clipping action %d of player %d blocks player %d",
                        action,
                        k,
                        j,
                    )
                    return True
    return False


def best_response(game, k, profile, cost=None):
    """
    Player k's best response restricted to f_k(s_-k), or to all of S_k when
    f_k(s_-k) is empty. With a cost model the response minimizes effort
    instead of maximizing utility. The current action is kept when it is
    among the best, otherwise the lowest best index wins.
    """
    candidates = [
        with_action(profile, k, action) for action in range(game.action_counts[k])
    ]
    feasible = [p for p in candidates if game.is_feasible_action(k, p)]
    if feasible:
        candidates = feasible

    def score(p):
        if cost is not None:
            return -cost.cost(k, p[k])
        return game.utility(k, p)

    scores = {p[k]: score(p) for p in candidates}
    best = max(scores.values())
    if scores.get(profile[k]) == best:
        return profile[k]
    return min(action for action, value in scores.items() if value == best)


def run_brd(game, start, max_iters, cost=None):
    """
    Round-robin best response dynamics from `start`.

    Returns (profile, converged, rounds); converged is True when a full round
    leaves the profile unchanged.
    """
    game.check_profile(start)
    if max_iters < 1:
        raise InvalidArgumentError("max_iters must be at least 1")
    if cost is not None:
        cost.check_game(game)
    profile = list(start)
    for rounds in range(1, max_iters + 1):
        changed = False
        for k in range(game.num_players):
            response = best_response(game, k, profile, cost)
            if response != profile[k]:
                profile[k] = response
                changed = True
        if not changed:
            logger.debug("BRD converged to %s after %d rounds", profile, rounds)
            return tuple(profile), True, rounds
    logger.info("BRD did not converge within %d rounds", max_iters)
    return tuple(profile), False, max_iters


def analyze(game, cost):
    report = EquilibriumReport(
        ne=enumerate_ne(game),
        gne=enumerate_gne(game),
        se=enumerate_se(game),
        ese=enumerate_ese(game, cost),
        clipping=find_clipping_actions(game),
        blocking_clipping=has_blocking_clipping(game),
    )
    logger.debug(
        "Found %d NE, %d GNE, %d SE and %d ESE among %d profiles",
        len(report.ne),
        len(report.gne),
        len(report.se),
        len(report.ese),
        game.num_profiles,
    )
    return report
