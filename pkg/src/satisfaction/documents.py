"""
Game and channel JSON documents.

A table game lists one K-dimensional utility array per player:

    {"players": 2, "thresholds": [1, 1], "caps": [2, 2],
     "utilities": {"table": [[[1, 0], [2, 1]], [[1, 2], [0, 1]]]},
     "costs": [[0, 1], [0, 1]]}

A channel game embeds a channel document; its caps default to the
single-user rates and its costs to the normalized transmit power:

    {"players": 2, "thresholds": [0.6, 1.2], "levels": 32,
     "utilities": {"channel": {"k": 2, "gain_sq": [[...], [...]],
                               "noise": [0.1, 0.1], "p_max": [1, 1],
                               "levels": 32}}}
"""

import json
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .channel import InterferenceChannel, single_user_cap, to_game
from .equilibria import CostModel
from .game import BoundsError, ConstrainedGame, InvalidArgumentError, validate_bounds

logger = logging.getLogger(__name__)


class GameDocumentError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{message} at {path}")
        self.path = path
        self.message = message


class ChannelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    k: int = Field(ge=1)
    gain_sq: list[list[float]]
    noise: list[float]
    p_max: list[float]
    levels: int = Field(ge=2)
    seed: int | None = None

    @model_validator(mode="after")
    def check_dimensions(self):
        rows = [len(row) for row in self.gain_sq]
        if len(rows) != self.k or any(n != self.k for n in rows):
            raise ValueError(f"gain_sq must be a {self.k}x{self.k} matrix")
        if len(self.noise) != self.k or len(self.p_max) != self.k:
            raise ValueError(f"noise and p_max need {self.k} entries")
        return self


class UtilitiesDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    table: list | None = None
    channel: ChannelDocument | None = None

    @model_validator(mode="after")
    def check_single_source(self):
        if (self.table is None) == (self.channel is None):
            raise ValueError("exactly one of 'table' or 'channel' is required")
        return self


class GameDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    players: int = Field(ge=1)
    thresholds: list[float]
    caps: list[float] | None = None
    utilities: UtilitiesDocument
    levels: int | None = Field(default=None, ge=2)
    costs: list[list[float]] | None = None


def format_location(location):
    path = ""
    for part in location:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path or "$"


def _parse(model, document):
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as error:
            raise GameDocumentError("$", f"invalid JSON: {error.msg}") from error
    try:
        return model.model_validate(document)
    except ValidationError as error:
        first = error.errors()[0]
        raise GameDocumentError(
            format_location(first["loc"]), first["msg"]
        ) from error


def _build_channel(document):
    try:
        return InterferenceChannel(
            gain_sq=np.array(document.gain_sq),
            noise=np.array(document.noise),
            p_max=np.array(document.p_max),
            levels=document.levels,
        )
    except InvalidArgumentError as error:
        raise GameDocumentError("utilities.channel", str(error)) from error


def load_channel(document):
    return _build_channel(_parse(ChannelDocument, document))


def _load_table_game(document):
    try:
        table = np.array(document.utilities.table, dtype=float)
    except (ValueError, TypeError) as error:
        raise GameDocumentError(
            "utilities.table", "utility tables must be rectangular numeric arrays"
        ) from error
    if table.ndim != document.players + 1 or table.shape[0] != document.players:
        raise GameDocumentError(
            "utilities.table",
            f"expected {document.players} tables with {document.players} dimensions",
        )
    if document.caps is None:
        raise GameDocumentError("caps", "table games must list their utility caps")
    return ConstrainedGame.from_tables(table, document.thresholds, document.caps)


def _load_channel_game(document):
    channel = _build_channel(document.utilities.channel)
    if channel.num_links != document.players:
        raise GameDocumentError(
            "utilities.channel.k", f"expected {document.players} links"
        )
    if document.levels is not None and document.levels != channel.levels:
        raise GameDocumentError(
            "levels", f"does not match the channel's {channel.levels} levels"
        )
    try:
        game, cost = to_game(channel, document.thresholds)
    except InvalidArgumentError as error:
        raise GameDocumentError("thresholds", str(error)) from error
    if document.caps is not None:
        rates = game
        game = ConstrainedGame(
            rates.action_counts,
            rates.thresholds,
            document.caps,
            rates.utilities,
            action_values=rates.action_values,
        )
    else:
        logger.debug(
            "Using single-user caps %s",
            [single_user_cap(channel, k) for k in range(channel.num_links)],
        )
    return game, cost


def _load_costs(document, game, default_cost):
    if document.costs is None:
        return default_cost or CostModel.uniform(game)
    if len(document.costs) != document.players:
        raise GameDocumentError("costs", f"expected {document.players} cost lists")
    for k, row in enumerate(document.costs):
        if len(row) != game.action_counts[k]:
            raise GameDocumentError(
                f"costs[{k}]", f"expected {game.action_counts[k]} entries"
            )
        if any(not 0.0 <= c <= 1.0 for c in row):
            raise GameDocumentError(f"costs[{k}]", "cost outside [0, 1]")
    return CostModel(document.costs)


def load_game(document):
    """Parse and validate a game document given as JSON text or a dict."""
    parsed = _parse(GameDocument, document)
    for field in ("thresholds", "caps"):
        values = getattr(parsed, field)
        if values is not None and len(values) != parsed.players:
            raise GameDocumentError(field, f"expected {parsed.players} entries")

    default_cost = None
    if parsed.utilities.channel is not None:
        game, default_cost = _load_channel_game(parsed)
    else:
        game = _load_table_game(parsed)
    try:
        validate_bounds(game)
    except BoundsError as error:
        path = f"{error.section}[{error.player}]"
        raise GameDocumentError(path, error.reason) from error
    cost = _load_costs(parsed, game, default_cost)
    logger.info(
        "Loaded a %d-player game with %d profiles",
        game.num_players,
        game.num_profiles,
    )
    return game, cost


def load_game_file(path):
    with open(path, encoding="utf-8") as f:
        return load_game(f.read())


def load_channel_file(path):
    with open(path, encoding="utf-8") as f:
        return load_channel(f.read())


def game_to_document(game, cost=None):
    document = {
        "players": game.num_players,
        "thresholds": game.thresholds.tolist(),
        "caps": game.caps.tolist(),
        "utilities": {"table": game.table.tolist()},
    }
    if cost is not None:
        document["costs"] = cost.as_lists()
    return document
