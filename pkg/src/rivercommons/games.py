"""Empirical game construction for the two action situations: the pairwise
irrigation game between consecutive farmers and the N-player common pool
resource fishing game, plus parsing of LLM-proposed game models.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .equilibrium import BimatrixGame, MixedProfile, enumerate_pure_ne, lemke_howson, select_equilibrium
from .errors import ConfigurationError, SchemaError
from .gateway import extract_structured


@dataclass(frozen=True)
class IrrigationGameSpec:
    """Parameters of the upstream/downstream irrigation game for one pair."""

    B_u: float                 # upstream budget
    B_d: float                 # downstream budget
    c: float                   # cost per irrigated field
    T: float                   # total water available to the pair
    w: float                   # water per field
    y0: float                  # baseline per-field yield
    ys: float                  # stressed per-field yield
    S: float                   # stress threshold in fields
    kappa: float               # consumption cost
    tau: float = 0.0           # tax coefficient
    F_u: float = 0.0           # upstream fishing income
    F_d: float = 0.0           # downstream fishing income
    max_fields: int = 10

    def __post_init__(self):
        if self.c <= 0 or self.w <= 0:
            raise ConfigurationError("c and w must be positive")
        if self.ys >= self.y0:
            raise ConfigurationError("stressed yield must be below baseline yield")
        if self.max_fields < 0 or self.tau < 0:
            raise ConfigurationError("max_fields and tau must be non-negative")


def irrigated_fields(s_u: int, s_d: int, spec: IrrigationGameSpec):
    """Fields actually irrigated: upstream has water priority; both are
    limited by budget affordability and floored to integers."""
    f_u = max(0, int(math.floor(min(s_u, spec.B_u / spec.c, spec.T / spec.w) + 1e-9)))
    f_d = max(0, int(math.floor(
        min(s_d, spec.B_d / spec.c, max(spec.T / spec.w - f_u, 0.0)) + 1e-9)))
    return f_u, f_d


def pair_payoffs(s_u: int, s_d: int, spec: IrrigationGameSpec):
    """Annual payoffs for a strategy pair: yield plus fishing income, minus
    irrigation and consumption costs and the extraction tax."""
    f_u, f_d = irrigated_fields(s_u, s_d, spec)
    y = spec.y0 if f_u + f_d <= spec.S else spec.ys
    total = s_u + s_d
    pi_u = f_u * y + spec.F_u - (f_u * spec.c + spec.kappa) - spec.tau * total * s_u
    pi_d = f_d * y + spec.F_d - (f_d * spec.c + spec.kappa) - spec.tau * total * s_d
    return pi_u, pi_d


def build_irrigation_game(spec: IrrigationGameSpec) -> BimatrixGame:
    """Normal form over field choices 0..max_fields for both players."""
    k = spec.max_fields + 1
    row = np.empty((k, k))
    col = np.empty((k, k))
    for s_u in range(k):
        for s_d in range(k):
            row[s_u, s_d], col[s_u, s_d] = pair_payoffs(s_u, s_d, spec)
    actions = tuple(range(k))
    return BimatrixGame(row, col, actions, actions)


def solve_irrigation_game(spec: IrrigationGameSpec, initial_label: int = 0):
    """Selected equilibrium strategies (s_u, s_d) for one pair.

    Pure equilibria are enumerated and selected by the min-total rule; the
    Lemke-Howson profile is the fallback when no pure equilibrium exists, in
    which case the most probable action on each side is taken.
    """
    game = build_irrigation_game(spec)
    pure = enumerate_pure_ne(game)
    if pure:
        profile = select_equilibrium(pure, MixedProfile.pure(0, 0, *game.shape),
                                     game.row_actions, game.col_actions)
    else:
        profile = lemke_howson(game, initial_label)
    return int(np.argmax(profile.row_dist)), int(np.argmax(profile.col_dist))


@dataclass(frozen=True)
class CprGame:
    """Symmetric fishing game handed to the equilibrium solver."""

    payoff: object            # callable u(e_own, sum_others) -> money
    n_players: int
    e_max: int


def build_cpr_fishing_game(adult_stock_estimate: float, params, n_players: int,
                           e_max: int, effort_cost: float = 1.0) -> CprGame:
    """Payoff u(e, O) = price * e * min(1, stock / (e + O)) - effort cost.

    The stock term shares the estimated adult stock proportionally to effort
    once total demand exceeds it.
    """
    if adult_stock_estimate < 0:
        raise ConfigurationError("stock estimate must be non-negative")
    price = params.fish_price
    stock = adult_stock_estimate

    def payoff(e, others):
        total = e + others
        share = min(1.0, stock / total) if total > 0 else min(1.0, stock)
        return price * e * share - effort_cost * e

    return CprGame(payoff, n_players, e_max)


class ASKind(str, Enum):
    PAIRWISE_COOPERATION = "pairwise_cooperation"
    COMMON_POOL_RESOURCE = "common_pool_resource"
    OTHER = "other"


@dataclass(frozen=True)
class ActionSituationModel:
    """A structured game model proposed for one action situation."""

    name: str
    kind: ASKind
    participants: int
    actions: tuple
    payoffs: tuple = None   # optional row-major cells for abstract 2x2 games

    def __post_init__(self):
        if self.participants < 2:
            raise SchemaError(f"action situation '{self.name}' needs >= 2 participants")
        if len(self.actions) < 1:
            raise SchemaError(f"action situation '{self.name}' needs >= 1 action")


_KIND_KEYWORDS = (
    (ASKind.PAIRWISE_COOPERATION, ("pairwise", "cooperation", "coordination", "neighbour", "neighbor")),
    (ASKind.COMMON_POOL_RESOURCE, ("common pool", "common-pool", "cpr", "extraction", "fishing")),
)


def _classify_kind(text: str) -> ASKind:
    lowered = text.lower()
    for kind, keywords in _KIND_KEYWORDS:
        if any(k in lowered for k in keywords):
            return kind
    return ASKind.OTHER


def _coerce_participants(value):
    if isinstance(value, int):
        return value
    if isinstance(value, (list, tuple)):
        return len(value)
    raise SchemaError(f"cannot interpret participants: {value!r}")


def _coerce_payoffs(value):
    if value is None:
        return None
    cells = []
    for row in value:
        for cell in row:
            if not isinstance(cell, (list, tuple)) or len(cell) != 2:
                raise SchemaError(f"payoff cell must be a pair, got {cell!r}")
            cells.append((float(cell[0]), float(cell[1])))
    return tuple(cells)


def _parse_one(item) -> ActionSituationModel:
    if not isinstance(item, dict):
        raise SchemaError(f"action situation entry must be an object, got {type(item).__name__}")
    name = str(item.get("name", "unnamed"))
    kind = _classify_kind(str(item.get("kind", "")) + " " + name)
    participants = _coerce_participants(item.get("participants", 0))
    actions = item.get("actions", [])
    if isinstance(actions, dict):  # per-participant action lists; take the first
        actions = next(iter(actions.values()), [])
    return ActionSituationModel(
        name=name, kind=kind, participants=participants,
        actions=tuple(str(a) for a in actions),
        payoffs=_coerce_payoffs(item.get("payoffs")))


def parse_llm_game(text: str):
    """Parse the gateway reply describing action situations.

    Returns a list of ActionSituationModel. Abstract action labels such as
    "high"/"low" are preserved verbatim; optional payoff cells are stored in
    row-major order. Raises SchemaError (carrying the text) when the reply
    has no usable structure.
    """
    if text is None or not text.strip():
        raise SchemaError("empty gateway reply", text=text)
    try:
        value = extract_structured(text)
    except SchemaError as err:
        raise SchemaError("no structured game description found", text=text) from err
    if isinstance(value, dict):
        items = value.get("action_situations") or value.get("games") or [value]
    elif isinstance(value, list):
        items = value
    else:
        raise SchemaError("reply carries no game structure", text=text)
    try:
        models = [_parse_one(item) for item in items]
    except SchemaError as err:
        raise SchemaError(str(err), text=text) from err
    if not models:
        raise SchemaError("reply describes no action situations", text=text)
    return models
