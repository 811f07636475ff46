import itertools
import logging

import numpy as np

logger = logging.getLogger(__name__)

# One action index per player.
Profile = tuple[int, ...]


class InvalidArgumentError(ValueError):
    pass


class TableEvaluator:
    def __init__(self, table):
        self._table = table

    def __call__(self, profile):
        return self._table[(slice(None),) + tuple(profile)]


class ConstrainedGame:
    """
    Finite normal-form game where every player k carries a satisfaction
    threshold Γ_k and a utility cap M_k.

    Utilities come either from dense tables (see from_tables) or from an
    evaluator mapping a profile to the K utilities. The evaluator is
    tabulated once, on first use of the dense table.

    By default player k's feasible actions are { a : u_k(a, s_-k) >= Γ_k }.
    A game may instead carry explicit per-player feasibility masks, which is
    how an arbitrary constraint correspondence is expressed.
    """

    def __init__(
        self,
        action_counts,
        thresholds,
        caps,
        evaluator,
        action_values=None,
        feasibility=None,
    ):
        self._action_counts = tuple(int(n) for n in action_counts)
        num_players = len(self._action_counts)
        if num_players < 1:
            raise InvalidArgumentError("a game needs at least one player")
        if any(n < 1 for n in self._action_counts):
            raise InvalidArgumentError(
                f"every player needs at least one action: {self._action_counts}"
            )
        if len(thresholds) != num_players or len(caps) != num_players:
            raise InvalidArgumentError(
                f"expected {num_players} thresholds and caps, got "
                f"{len(thresholds)} and {len(caps)}"
            )
        self._thresholds = np.asarray(thresholds, dtype=float)
        self._caps = np.asarray(caps, dtype=float)
        self._evaluator = evaluator
        self._table = None

        if action_values is None:
            action_values = [list(range(n)) for n in self._action_counts]
        if [len(values) for values in action_values] != list(self._action_counts):
            raise InvalidArgumentError("action_values do not match action_counts")
        self._action_values = tuple(
            tuple(float(v) for v in values) for values in action_values
        )

        self._feasibility = None
        if feasibility is not None:
            masks = tuple(np.asarray(mask, dtype=bool) for mask in feasibility)
            if len(masks) != num_players or any(
                mask.shape != self._action_counts for mask in masks
            ):
                raise InvalidArgumentError(
                    "feasibility masks must have one profile-shaped mask per player"
                )
            self._feasibility = masks

    @classmethod
    def from_tables(
        cls, tables, thresholds, caps, action_values=None, feasibility=None
    ):
        table = np.asarray(tables, dtype=float)
        if table.ndim < 2 or table.shape[0] != table.ndim - 1:
            raise InvalidArgumentError(
                f"expected one {table.ndim - 1}-dimensional table per player, "
                f"got array of shape {table.shape}"
            )
        game = cls(
            table.shape[1:],
            thresholds,
            caps,
            TableEvaluator(table),
            action_values=action_values,
            feasibility=feasibility,
        )
        game._table = table
        return game

    @property
    def num_players(self):
        return len(self._action_counts)

    @property
    def action_counts(self):
        return self._action_counts

    @property
    def thresholds(self):
        return self._thresholds

    @property
    def caps(self):
        return self._caps

    @property
    def action_values(self):
        return self._action_values

    @property
    def num_profiles(self):
        return int(np.prod(self._action_counts))

    @property
    def has_explicit_feasibility(self):
        return self._feasibility is not None

    @property
    def table(self):
        """Utilities as an array of shape (K, |S_1|, ..., |S_K|)."""
        if self._table is None:
            logger.debug(
                "Tabulating %d profiles for a %d-player game",
                self.num_profiles,
                self.num_players,
            )
            table = np.empty((self.num_players,) + self._action_counts, dtype=float)
            for profile in self.profiles():
                table[(slice(None),) + profile] = self._evaluator(profile)
            self._table = table
        return self._table

    def __getstate__(self):
        # Closed-form evaluators may not pickle; ship the dense table instead.
        state = self.__dict__.copy()
        state["_evaluator"] = TableEvaluator(self.table)
        return state

    def profiles(self):
        return itertools.product(*(range(n) for n in self._action_counts))

    def check_player(self, k):
        if not 0 <= k < self.num_players:
            raise InvalidArgumentError(
                f"player index {k} out of range for {self.num_players} players"
            )

    def check_profile(self, profile):
        if len(profile) != self.num_players:
            raise InvalidArgumentError(
                f"profile {tuple(profile)} has {len(profile)} entries, "
                f"expected {self.num_players}"
            )
        for k, (action, count) in enumerate(zip(profile, self._action_counts)):
            if not 0 <= action < count:
                raise InvalidArgumentError(
                    f"action {action} out of range for player {k} "
                    f"with {count} actions"
                )

    def utility(self, k, profile):
        if self._table is not None:
            return float(self._table[(k,) + tuple(profile)])
        return float(self._evaluator(tuple(profile))[k])

    def utilities(self, profile):
        if self._table is not None:
            return self._table[(slice(None),) + tuple(profile)].copy()
        return np.asarray(self._evaluator(tuple(profile)), dtype=float)

    def feasible_mask(self, k):
        """Profile-shaped boolean mask, True where s_k is in f_k(s_-k)."""
        if self._feasibility is not None:
            return self._feasibility[k]
        return self.table[k] >= self._thresholds[k]

    def satisfied_mask(self):
        mask = np.ones(self._action_counts, dtype=bool)
        for k in range(self.num_players):
            mask &= self.feasible_mask(k)
        return mask

    def is_feasible_action(self, k, profile):
        if self._feasibility is not None:
            return bool(self._feasibility[k][tuple(profile)])
        return self.utility(k, profile) >= self._thresholds[k]


def with_action(profile, k, action):
    return tuple(profile[:k]) + (action,) + tuple(profile[k + 1 :])


def profile_index(game, profile):
    game.check_profile(profile)
    return int(np.ravel_multi_index(tuple(profile), game.action_counts))


def profile_from_index(game, index):
    if not 0 <= index < game.num_profiles:
        raise InvalidArgumentError(f"profile index {index} out of range")
    return tuple(int(a) for a in np.unravel_index(index, game.action_counts))


def utility_of(game, k, profile):
    game.check_player(k)
    game.check_profile(profile)
    return game.utility(k, profile)


def feasible_set(game, k, opponents):
    """Actions of player k meeting its constraint against the opponents' actions.

    `opponents` lists the K-1 actions of the other players in player order.
    """
    game.check_player(k)
    if len(opponents) != game.num_players - 1:
        raise InvalidArgumentError(
            f"expected {game.num_players - 1} opponent actions, got {len(opponents)}"
        )
    opponents = tuple(opponents)
    game.check_profile(opponents[:k] + (0,) + opponents[k:])
    return frozenset(
        action
        for action in range(game.action_counts[k])
        if game.is_feasible_action(k, opponents[:k] + (action,) + opponents[k:])
    )


def is_satisfied(game, k, profile):
    game.check_player(k)
    game.check_profile(profile)
    return game.is_feasible_action(k, profile)


class BoundsError(InvalidArgumentError):
    """A threshold or utility outside the [0, M_k] box of one player."""

    def __init__(self, section, player, reason):
        super().__init__(f"{reason} for player {player}")
        self.section = section
        self.player = player
        self.reason = reason


def validate_bounds(game):
    """Check 0 <= Γ_k <= M_k and 0 <= u_k(s) <= M_k over the whole table.

    Raises BoundsError naming the section ("players" for thresholds and
    caps, "utilities" for the table) and the first offending player.
    """
    table = game.table
    for k in range(game.num_players):
        cap = game.caps[k]
        threshold = game.thresholds[k]
        if not (np.isfinite(threshold) and np.isfinite(cap)):
            raise BoundsError("players", k, "non-finite threshold or cap")
        if threshold < 0:
            raise BoundsError("players", k, "negative threshold")
        if threshold > cap:
            raise BoundsError("players", k, "threshold exceeds utility cap")
        if not np.all(np.isfinite(table[k])):
            raise BoundsError("utilities", k, "non-finite utility")
        if table[k].min() < 0 or table[k].max() > cap:
            raise BoundsError("utilities", k, f"utility outside [0, {cap}]")


def random_game(rng, num_players, max_actions, cap=1.0):
    counts = tuple(int(n) for n in rng.integers(1, max_actions + 1, size=num_players))
    tables = rng.uniform(0.0, cap, size=(num_players,) + counts)
    thresholds = rng.uniform(0.0, cap, size=num_players)
    return ConstrainedGame.from_tables(tables, thresholds, [cap] * num_players)
