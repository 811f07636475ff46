import copy

from satisfaction.equilibria import CostModel
from satisfaction.game import ConstrainedGame

G1_TABLES = [[[1, 0], [2, 1]], [[1, 2], [0, 1]]]
G2_TABLES = [[[0, 0], [1, 1], [1, 0]], [[0, 0], [0, 0], [1, 0]]]


def game_g1():
    return ConstrainedGame.from_tables(G1_TABLES, [1, 1], [2, 2])


def game_g2():
    """Player 0's action 1 always satisfies it and leaves player 1 nothing."""
    return ConstrainedGame.from_tables(G2_TABLES, [1, 1], [1, 1])


def effort_g1():
    return CostModel([[0, 1], [0, 1]])


def g1_document():
    return {
        "players": 2,
        "thresholds": [1, 1],
        "caps": [2, 2],
        "utilities": {"table": copy.deepcopy(G1_TABLES)},
        "costs": [[0, 1], [0, 1]],
    }


def g2_document():
    return {
        "players": 2,
        "thresholds": [1, 1],
        "caps": [1, 1],
        "utilities": {"table": copy.deepcopy(G2_TABLES)},
    }


def random_costs(rng, game):
    return CostModel([rng.uniform(0.0, 1.0, size=n) for n in game.action_counts])
