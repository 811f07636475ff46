import csv
import json
import logging
import os

from .game import profile_index

logger = logging.getLogger(__name__)

EQUILIBRIUM_SETS = ("ne", "gne", "se", "ese")


def sorted_profiles(profiles):
    return [list(p) for p in sorted(profiles)]


def ne_outside_se(report):
    return sorted_profiles(report.ne - report.se)


def gne_dominates_ese_power(game, report):
    """
    True when every GNE uses at least the power (action value) of every ESE
    on every link; None when either set is empty.
    """
    if not report.gne or not report.ese:
        return None
    values = game.action_values
    return all(
        values[k][g[k]] >= values[k][e[k]]
        for g in report.gne
        for e in report.ese
        for k in range(game.num_players)
    )


def report_to_dict(game, report, seed=None):
    document = {
        name: sorted_profiles(getattr(report, name)) for name in EQUILIBRIUM_SETS
    }
    document.update(
        {
            "players": game.num_players,
            "action_counts": list(game.action_counts),
            "thresholds": game.thresholds.tolist(),
            "caps": game.caps.tolist(),
            "clipping": [sorted(actions) for actions in report.clipping],
            "blocking_clipping": report.blocking_clipping,
            "feasible": report.feasible,
            "ne_outside_se": ne_outside_se(report),
            "gne_dominates_ese_power": gne_dominates_ese_power(game, report),
            "seed": seed,
        }
    )
    return document


def ensure_directory(path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def write_json(path, document):
    ensure_directory(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug("Wrote %s", path)


def write_rate_map(path, game, report):
    """One row per profile: actions, action values, utilities and equilibrium flags."""
    players = range(game.num_players)
    header = (
        ["profile_index"]
        + [f"action_index_{k}" for k in players]
        + [f"action_value_{k}" for k in players]
        + [f"utility_{k}" for k in players]
        + list(EQUILIBRIUM_SETS)
    )
    table = game.table
    ensure_directory(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for profile in game.profiles():
            writer.writerow(
                [profile_index(game, profile)]
                + list(profile)
                + [repr(game.action_values[k][profile[k]]) for k in players]
                + [repr(float(table[(k,) + profile])) for k in players]
                + [int(profile in getattr(report, name)) for name in EQUILIBRIUM_SETS]
            )
    logger.debug("Wrote %s", path)


def write_trace(path, game, trace):
    ensure_directory(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(
            ["t", "player", "action_index", "action_value", "utility", "satisfied"]
        )
        for t, profile in enumerate(trace.profiles):
            for k, action in enumerate(profile):
                writer.writerow(
                    [
                        t,
                        k,
                        action,
                        repr(game.action_values[k][action]),
                        repr(float(trace.utilities[t, k])),
                        int(trace.satisfied[t, k]),
                    ]
                )


def summary_to_dict(tally, traces, se, config, seed):
    converged_outside_se = [
        run
        for run, trace in enumerate(traces)
        if trace.converged and tuple(trace.terminal_profile) not in se
    ]
    return {
        "runs": tally.total_runs(),
        "seed": seed,
        "max_steps": config.max_steps,
        "learning_rate": config.learning_rate,
        "converged_runs": tally.converged_runs(),
        "convergence_frequency": tally.convergence_frequency(),
        "mean_convergence_time": tally.mean_convergence_time(),
        "convergence_time_percentiles": tally.convergence_percentiles(),
        "terminal_profiles": {str(index): count for index, count in tally.items()},
        "converged_at": [trace.converged_at for trace in traces],
        "converged_outside_se": converged_outside_se,
    }
