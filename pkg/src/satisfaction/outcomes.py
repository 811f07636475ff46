from collections import Counter

import numpy as np

from .game import profile_index


class TerminalProfiles:
    """Tally of where independent SESA runs end up."""

    def __init__(self, game):
        self._game = game
        self._counts = Counter()
        self._convergence_times = []
        self._runs = 0

    def count(self):
        return len(self._counts)

    def total_runs(self):
        return self._runs

    def converged_runs(self):
        return len(self._convergence_times)

    def convergence_frequency(self):
        return self.converged_runs() / self._runs if self._runs else 0.0

    def items(self):
        return tuple(sorted(self._counts.items()))

    def update(self, trace):
        self._runs += 1
        if trace.converged:
            self._convergence_times.append(trace.converged_at)
            self._counts[profile_index(self._game, trace.terminal_profile)] += 1

    def mean_convergence_time(self):
        if not self._convergence_times:
            return None
        return float(np.mean(self._convergence_times))

    def convergence_percentiles(self, quantiles=(50, 90, 99)):
        if not self._convergence_times:
            return {str(q): None for q in quantiles}
        values = np.percentile(self._convergence_times, quantiles)
        return {str(q): float(v) for q, v in zip(quantiles, values)}
