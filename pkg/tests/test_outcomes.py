import unittest

import numpy as np

from satisfaction.outcomes import TerminalProfiles
from satisfaction.sesa import SesaConfig, run_sesa
from tests.fixtures import game_g1


class FakeTrace:
    def __init__(self, terminal_profile, converged_at):
        self.terminal_profile = terminal_profile
        self.converged_at = converged_at

    @property
    def converged(self):
        return self.converged_at is not None


class TestTerminalProfiles(unittest.TestCase):

    def test_empty(self):
        tally = TerminalProfiles(game_g1())
        self.assertEqual(tally.count(), 0)
        self.assertEqual(tally.convergence_frequency(), 0.0)
        self.assertIsNone(tally.mean_convergence_time())
        self.assertEqual(
            tally.convergence_percentiles(), {"50": None, "90": None, "99": None}
        )

    def test_counts_converged_runs_by_profile_index(self):
        tally = TerminalProfiles(game_g1())
        tally.update(FakeTrace((1, 1), 4))
        tally.update(FakeTrace((0, 0), 2))
        tally.update(FakeTrace((1, 1), 6))
        tally.update(FakeTrace((0, 1), None))
        self.assertEqual(tally.total_runs(), 4)
        self.assertEqual(tally.converged_runs(), 3)
        self.assertEqual(tally.count(), 2)
        self.assertEqual(tally.items(), ((0, 1), (3, 2)))
        self.assertEqual(tally.convergence_frequency(), 0.75)
        self.assertEqual(tally.mean_convergence_time(), 4.0)
        self.assertEqual(tally.convergence_percentiles((50,)), {"50": 4.0})

    def test_real_runs(self):
        game = game_g1()
        tally = TerminalProfiles(game)
        for seed in range(25):
            tally.update(
                run_sesa(game, np.random.default_rng(seed), SesaConfig(max_steps=500))
            )
        self.assertEqual(tally.total_runs(), 25)
        self.assertLessEqual({index for index, _ in tally.items()}, {0, 3})


if __name__ == "__main__":
    unittest.main()
