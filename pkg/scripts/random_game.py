#!/usr/bin/python
import argparse
import json

import numpy as np

from satisfaction.documents import game_to_document
from satisfaction.equilibria import CostModel
from satisfaction.game import random_game


def random_costs(rng, game):
    return CostModel([rng.uniform(0.0, 1.0, size=n) for n in game.action_counts])


def write_game_file(filename, game, cost):
    with open(filename, "w", encoding="utf-8") as f:
        json.dump(game_to_document(game, cost), f, indent=2)
        f.write("\n")


def main():
    parser = argparse.ArgumentParser(
        description="Write a random table game document with uniform utilities "
        "and thresholds in [0, cap]."
    )
    parser.add_argument("json_file", help="Output game document")
    parser.add_argument(
        "-k", "--players", type=int, default=2, help="Number of players (default: 2)"
    )
    parser.add_argument(
        "-a",
        "--max-actions",
        type=int,
        default=4,
        help="Maximum number of actions per player (default: 4)",
    )
    parser.add_argument(
        "-c", "--cap", type=float, default=1.0, help="Utility cap (default: 1.0)"
    )
    parser.add_argument(
        "-s", "--seed", type=int, default=0, help="Random seed (default: 0)"
    )
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    game = random_game(rng, args.players, args.max_actions, args.cap)
    write_game_file(args.json_file, game, random_costs(rng, game))


if __name__ == "__main__":
    main()
