import itertools
import unittest

import numpy as np

from satisfaction.equilibria import (
    CostModel,
    analyze,
    cost_game,
    enumerate_ese,
    enumerate_gne,
    enumerate_ne,
    enumerate_se,
    find_clipping_actions,
    has_blocking_clipping,
    is_feasible,
    potential_of,
    run_brd,
    verify_potential_identity,
)
from satisfaction.game import ConstrainedGame, InvalidArgumentError, random_game
from tests.fixtures import effort_g1, game_g1, game_g2, random_costs
from tests.oracles import brute_force, is_ese, is_gne, is_ne, is_se


def random_games(count, seed=2024):
    rng = np.random.default_rng(seed)
    for i in range(count):
        num_players = 1 + i % 3
        game = random_game(rng, num_players, 6, cap=float(rng.uniform(0.5, 3.0)))
        yield game, random_costs(rng, game)


class TestReferenceGames(unittest.TestCase):

    def test_g1_sets(self):
        game = game_g1()
        self.assertEqual(enumerate_ne(game), {(1, 1)})
        self.assertEqual(enumerate_gne(game), {(1, 1)})
        self.assertEqual(enumerate_se(game), {(0, 0), (1, 1)})
        self.assertEqual(enumerate_ese(game, effort_g1()), {(0, 0), (1, 1)})

    def test_g2_sets(self):
        game = game_g2()
        self.assertEqual(enumerate_se(game), {(2, 0)})
        self.assertEqual(enumerate_ne(game), {(1, 0), (1, 1), (2, 0)})

    def test_g1_clipping(self):
        self.assertEqual(find_clipping_actions(game_g1()), ({1}, {1}))
        self.assertFalse(has_blocking_clipping(game_g1()))

    def test_g2_clipping(self):
        self.assertEqual(find_clipping_actions(game_g2()), ({1}, set()))
        self.assertTrue(has_blocking_clipping(game_g2()))

    def test_single_player(self):
        game = ConstrainedGame.from_tables([[0.2, 0.7, 0.7, 0.1]], [0.5], [1.0])
        self.assertEqual(enumerate_ne(game), {(1,), (2,)})
        self.assertFalse(has_blocking_clipping(game))

    def test_report(self):
        report = analyze(game_g2(), CostModel.uniform(game_g2()))
        self.assertTrue(report.feasible)
        self.assertTrue(report.blocking_clipping)
        self.assertEqual(report.ese, report.se)


class TestDegenerateGames(unittest.TestCase):

    def test_zero_thresholds(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            game = random_game(rng, 2, 5)
            free = ConstrainedGame.from_tables(game.table, [0, 0], game.caps)
            self.assertEqual(enumerate_se(free), frozenset(free.profiles()))
            self.assertEqual(enumerate_gne(free), enumerate_ne(free))
            for actions, count in zip(
                find_clipping_actions(free), free.action_counts
            ):
                self.assertEqual(actions, set(range(count)))

    def test_infeasible_game(self):
        game = ConstrainedGame.from_tables(
            [[[0.1, 0.2], [0.3, 0.4]], [[0.5, 0.5], [0.5, 0.5]]], [0.9, 0.1], [1, 1]
        )
        self.assertFalse(is_feasible(game))
        self.assertEqual(enumerate_se(game), set())
        self.assertEqual(enumerate_gne(game), set())
        self.assertEqual(enumerate_ese(game, CostModel.uniform(game)), set())

    def test_uniform_cost_ese_is_se(self):
        for game, _ in random_games(50, seed=99):
            self.assertEqual(
                enumerate_ese(game, CostModel.uniform(game, 0.4)), enumerate_se(game)
            )


class TestRandomGameProperties(unittest.TestCase):
    """Checks over 500 random games with up to 3 players and 6 actions each."""

    @classmethod
    def setUpClass(cls):
        cls.games = list(random_games(500))

    def test_containment(self):
        for game, cost in self.games:
            se = enumerate_se(game)
            everything = frozenset(game.profiles())
            self.assertLessEqual(enumerate_gne(game), se)
            self.assertLessEqual(enumerate_ese(game, cost), se)
            self.assertLessEqual(se, everything)
            self.assertLessEqual(enumerate_ne(game), everything)

    def test_matches_definitions(self):
        for game, cost in self.games:
            self.assertEqual(
                enumerate_ne(game), brute_force(game, lambda p: is_ne(game, p))
            )
            self.assertEqual(
                enumerate_gne(game), brute_force(game, lambda p: is_gne(game, p))
            )
            self.assertEqual(
                enumerate_se(game), brute_force(game, lambda p: is_se(game, p))
            )
            self.assertEqual(
                enumerate_ese(game, cost),
                brute_force(game, lambda p: is_ese(game, cost, p)),
            )

    def test_ese_are_gne_of_cost_game(self):
        for game, cost in self.games:
            auxiliary = cost_game(game, cost)
            self.assertEqual(enumerate_ese(game, cost), enumerate_gne(auxiliary))
            self.assertEqual(
                enumerate_gne(auxiliary),
                brute_force(auxiliary, lambda p: is_gne(auxiliary, p)),
            )

    def test_potential_identity(self):
        for game, cost in self.games:
            self.assertTrue(
                verify_potential_identity(
                    game, cost, lambda p: potential_of(cost, p)
                )
            )

    def test_ese_minimizes_potential_unilaterally(self):
        for game, cost in self.games:
            se = enumerate_se(game)
            for profile in enumerate_ese(game, cost):
                for k in range(game.num_players):
                    for a in range(game.action_counts[k]):
                        other = profile[:k] + (a,) + profile[k + 1 :]
                        if other in se:
                            self.assertLessEqual(
                                potential_of(cost, profile), potential_of(cost, other)
                            )

    def test_cost_scaling_keeps_ese(self):
        for game, cost in self.games:
            ese = enumerate_ese(game, cost)
            self.assertEqual(enumerate_ese(game, cost.scaled(0.5)), ese)
            self.assertEqual(enumerate_ese(game, cost.scaled(0.25)), ese)


class TestPotential(unittest.TestCase):

    def test_potential_values(self):
        self.assertEqual(potential_of(effort_g1(), (0, 0)), 0.0)
        self.assertEqual(potential_of(effort_g1(), (1, 1)), 2.0)
        zero = CostModel.uniform(game_g1())
        self.assertEqual(potential_of(zero, (1, 0)), 0.0)

    def test_shifted_potential(self):
        cost = effort_g1()
        self.assertTrue(
            verify_potential_identity(
                game_g1(), cost, lambda p: potential_of(cost, p) + 3.25
            )
        )

    def test_partial_potential_is_rejected(self):
        # Player 1's feasible set against action 0 of player 0 is {0, 1}.
        cost = effort_g1()
        self.assertFalse(
            verify_potential_identity(game_g1(), cost, lambda p: cost.cost(0, p[0]))
        )

    def test_exact_with_awkward_costs(self):
        cost = CostModel([[0.1, 0.7], [0.2, 0.3]])
        game = ConstrainedGame.from_tables(np.zeros((2, 2, 2)), [0, 0], [1, 1])
        self.assertTrue(
            verify_potential_identity(game, cost, lambda p: potential_of(cost, p))
        )

    def test_cost_range_is_checked(self):
        with self.assertRaises(InvalidArgumentError):
            CostModel([[0.0, 1.5]])
        with self.assertRaises(InvalidArgumentError):
            enumerate_ese(game_g1(), CostModel([[0.0], [0.0]]))


class TestBestResponseDynamics(unittest.TestCase):

    def test_g1_from_origin(self):
        profile, converged, rounds = run_brd(game_g1(), (0, 0), 10)
        self.assertEqual(profile, (1, 1))
        self.assertTrue(converged)
        self.assertLessEqual(rounds, 2)

    def test_start_at_gne(self):
        self.assertEqual(run_brd(game_g1(), (1, 1), 10), ((1, 1), True, 1))

    def test_g2_stalls_outside_se(self):
        game = game_g2()
        profile, _, _ = run_brd(game, (1, 0), 50)
        self.assertEqual(profile[0], 1)
        self.assertNotIn(profile, enumerate_se(game))

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            game = random_game(rng, 3, 4)
            start = tuple(0 for _ in range(3))
            self.assertEqual(run_brd(game, start, 30), run_brd(game, start, 30))

    def test_converged_profiles_are_gne_when_satisfied(self):
        for game, _ in itertools.islice(random_games(200, seed=5), 200):
            start = (0,) * game.num_players
            profile, converged, _ = run_brd(game, start, 50)
            if converged and profile in enumerate_se(game):
                self.assertIn(profile, enumerate_gne(game))

    def test_cost_objective_reaches_ese(self):
        game = game_g1()
        profile, converged, _ = run_brd(game, (1, 1), 10, cost=effort_g1())
        self.assertTrue(converged)
        self.assertIn(profile, enumerate_ese(game, effort_g1()))

    def test_rejects_zero_rounds(self):
        with self.assertRaises(InvalidArgumentError):
            run_brd(game_g1(), (0, 0), 0)

    def test_non_convergence_is_reported(self):
        # Matching pennies has no pure equilibrium, so BRD cycles.
        pennies = ConstrainedGame.from_tables(
            [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [0, 0], [1, 1]
        )
        profile, converged, rounds = run_brd(pennies, (0, 0), 25)
        self.assertFalse(converged)
        self.assertEqual(rounds, 25)


if __name__ == "__main__":
    unittest.main()
