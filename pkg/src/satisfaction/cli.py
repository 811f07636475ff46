import argparse
import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np

from .channel import channel_to_document, sample_channel, to_game
from .documents import GameDocumentError, load_channel_file, load_game_file
from .equilibria import (
    analyze,
    enumerate_ese,
    enumerate_gne,
    enumerate_se,
    is_feasible,
    run_brd,
)
from .game import InvalidArgumentError
from .outcomes import TerminalProfiles
from .result_text import AbstractResultText, ResultText
from .results import (
    report_to_dict,
    summary_to_dict,
    write_json,
    write_rate_map,
    write_trace,
)
from .sesa import SesaConfig, run_many

logger = logging.getLogger(__name__)

MODES = ("enumerate", "sesa", "brd", "channel-gen")
EXIT_OK = 0
EXIT_IO_ERROR = 1
EXIT_VALIDATION_ERROR = 2
EXIT_INFEASIBLE = 3


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    game: str | None = None
    channel: str | None = None
    links: int | None = None
    snr_db: float = 10.0
    levels: int = 32
    gamma: list = field(default_factory=list)
    seed: int = 0
    runs: int = 100
    max_steps: int = 10_000
    tail: int = 10
    learning_rate: float | None = None
    workers: int = 1
    start: list | None = None
    max_iters: int = 100
    objective: str = "utility"
    out: str = "out"
    strict: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        sources = [
            name
            for name, value in (
                ("game", self.game),
                ("channel", self.channel),
                ("links", self.links),
            )
            if value is not None
        ]
        if self.mode == "channel-gen":
            if self.links is None or self.game or self.channel:
                raise ConfigError("channel-gen needs --links and no game document")
        elif len(sources) != 1:
            raise ConfigError(
                f"exactly one game source is required "
                f"(game, channel or links), got {sources or 'none'}"
            )
        if self.links is not None and self.links < 1:
            raise ConfigError("links must be at least 1")
        if self.levels < 2:
            raise ConfigError("levels must be at least 2")
        if self.runs < 1 or self.max_steps < 1 or self.max_iters < 1:
            raise ConfigError("runs, max_steps and max_iters must be at least 1")
        if self.tail < 0 or self.workers < 1:
            raise ConfigError("tail must be nonnegative and workers positive")
        if self.objective not in ("utility", "cost"):
            raise ConfigError(f"unknown objective {self.objective!r}")
        if self.mode != "channel-gen" and self.game is None and not self.gamma:
            raise ConfigError("channel games need --gamma thresholds")

    @classmethod
    def from_sources(cls, mode, config_path=None, overrides=None):
        values = {}
        if config_path is not None:
            with open(config_path, encoding="utf-8") as f:
                try:
                    values = json.load(f)
                except json.JSONDecodeError as error:
                    raise ConfigError(f"{config_path}: {error.msg}") from error
            if not isinstance(values, dict):
                raise ConfigError(f"{config_path}: expected a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {unknown}")
        values.update(
            {
                key: value
                for key, value in (overrides or {}).items()
                if value is not None
            }
        )
        values["mode"] = mode
        return cls(**values)

    def sesa_config(self):
        return SesaConfig(
            max_steps=self.max_steps,
            tail=self.tail,
            learning_rate=self.learning_rate,
        )


def build_game(config):
    if config.game is not None:
        return load_game_file(config.game)
    if config.channel is not None:
        channel = load_channel_file(config.channel)
    else:
        channel = sample_channel(
            np.random.default_rng(config.seed),
            config.links,
            config.snr_db,
            config.levels,
        )
    return to_game(channel, config.gamma)


def output_path(config, *parts):
    return os.path.join(config.out, *parts)


def cmd_enumerate(config, result_text=AbstractResultText()):
    game, cost = build_game(config)
    report = analyze(game, cost)
    write_json(
        output_path(config, "report.json"),
        report_to_dict(game, report, seed=config.seed),
    )
    write_rate_map(output_path(config, "rate_map.csv"), game, report)
    result_text.print_report_summary(game, report)
    if not report.feasible:
        logger.warning("The game is infeasible: no profile satisfies every player")
        return EXIT_INFEASIBLE if config.strict else EXIT_OK
    return EXIT_OK


def cmd_sesa(config, result_text=AbstractResultText()):
    game, _ = build_game(config)
    if not is_feasible(game):
        logger.warning("The game is infeasible: SESA cannot converge")
        if config.strict:
            return EXIT_INFEASIBLE
    se = enumerate_se(game)
    traces = run_many(
        game, config.runs, config.seed, config.sesa_config(), config.workers
    )
    tally = TerminalProfiles(game)
    for run, trace in enumerate(traces):
        write_trace(output_path(config, "traces", f"trace_{run:04d}.csv"), game, trace)
        tally.update(trace)
    summary = summary_to_dict(tally, traces, se, config.sesa_config(), config.seed)
    if summary["converged_outside_se"]:
        logger.error(
            "Runs %s converged outside the satisfaction equilibria",
            summary["converged_outside_se"],
        )
    write_json(output_path(config, "summary.json"), summary)
    result_text.print_sesa_summary(tally)
    return EXIT_OK


def cmd_brd(config, result_text=AbstractResultText()):
    game, cost = build_game(config)
    start = tuple(config.start) if config.start else (0,) * game.num_players
    objective = cost if config.objective == "cost" else None
    profile, converged, rounds = run_brd(game, start, config.max_iters, objective)
    document = {
        "start": list(start),
        "objective": config.objective,
        "profile": list(profile),
        "converged": converged,
        "iterations": rounds,
        "in_se": bool(game.satisfied_mask()[profile]),
        "in_gne": profile in enumerate_gne(game),
        "in_ese": profile in enumerate_ese(game, cost),
        "seed": config.seed,
    }
    write_json(output_path(config, "brd.json"), document)
    result_text.print_brd_result(profile, converged, rounds)
    return EXIT_OK


def cmd_channel_gen(config, result_text=AbstractResultText()):
    channel = sample_channel(
        np.random.default_rng(config.seed),
        config.links,
        config.snr_db,
        config.levels,
    )
    write_json(
        output_path(config, "channel.json"),
        channel_to_document(channel, seed=config.seed),
    )
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "sesa": cmd_sesa,
    "brd": cmd_brd,
    "channel-gen": cmd_channel_gen,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment configuration")
    common.add_argument("--seed", type=int, help="Base random seed (default: 0)")
    common.add_argument("--out", help="Output directory (default: out)")
    common.add_argument("--game", help="Game document (JSON)")
    common.add_argument("--channel", help="Channel document (JSON)")
    common.add_argument(
        "-k", "--links", type=int, help="Sample a channel with this many links"
    )
    common.add_argument(
        "--snr-db", type=float, help="Average SNR of sampled channels (default: 10)"
    )
    common.add_argument(
        "-n", "--levels", type=int, help="Power levels per link (default: 32)"
    )
    common.add_argument(
        "--gamma", type=float, nargs="+", help="Rate thresholds of channel games"
    )
    common.add_argument(
        "--strict",
        action="store_true",
        default=None,
        help="Exit with code 3 when the game is infeasible",
    )
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        description="Enumerate equilibria of QoS-constrained games and "
        "simulate satisfaction equilibrium search."
    )
    verbs = parser.add_subparsers(dest="mode", required=True)
    verbs.add_parser(
        "enumerate", parents=[common], help="Enumerate NE, GNE, SE and ESE"
    )
    sesa = verbs.add_parser("sesa", parents=[common], help="Run SESA Monte Carlo")
    sesa.add_argument(
        "-r", "--runs", type=int, help="Number of independent runs (default: 100)"
    )
    sesa.add_argument(
        "-t", "--max-steps", type=int, help="Steps per run (default: 10000)"
    )
    sesa.add_argument(
        "--tail", type=int, help="Steps kept after convergence (default: 10)"
    )
    sesa.add_argument(
        "--learning-rate", type=float, help="Constant learning rate (default: 1/(t+1))"
    )
    sesa.add_argument("-w", "--workers", type=int, help="Worker processes (default: 1)")
    brd = verbs.add_parser(
        "brd", parents=[common], help="Run best response dynamics"
    )
    brd.add_argument("--start", type=int, nargs="+", help="Start profile (default: 0s)")
    brd.add_argument(
        "--max-iters", type=int, help="Maximum number of rounds (default: 100)"
    )
    brd.add_argument(
        "--objective",
        choices=("utility", "cost"),
        help="Maximize utility or minimize effort (default: utility)",
    )
    verbs.add_parser(
        "channel-gen", parents=[common], help="Sample a channel document"
    )
    return parser


def main(argv=None, result_text=ResultText()):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("mode", "config", "verbose")
    }
    try:
        config = ExperimentConfig.from_sources(args.mode, args.config, overrides)
        return COMMANDS[config.mode](config, result_text)
    except (ConfigError, GameDocumentError, InvalidArgumentError) as error:
        logger.error("%s", error)
        return EXIT_VALIDATION_ERROR
    except OSError as error:
        logger.error("I/O error: %s", error)
        return EXIT_IO_ERROR
