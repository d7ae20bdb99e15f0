"""Exact solving and interactive play for discrete bidding games."""

from .bidding import Player, Rule
from .graphs import (
    GameGraph,
    Outcome,
    build_primitive,
    build_tug,
    build_ult,
    reverse,
    truncate,
    wedge,
)
from .holdings import ChipHolding, Marker, Ordering, compare_holdings
from .oracle import ChipState, OutcomeTable, Verdict, outcome, solve_chip_states, solve_restricted
from .richman import RichmanProfile, random_turn_value, richman_bounded, richman_finite
from .thresholds import (
    NEVER_WINS,
    Action,
    ThresholdValue,
    combine,
    optimal_action,
    threshold_bounded,
)
from .ttt import build_ttt

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ChipHolding",
    "ChipState",
    "GameGraph",
    "Marker",
    "NEVER_WINS",
    "Ordering",
    "Outcome",
    "OutcomeTable",
    "Player",
    "RichmanProfile",
    "Rule",
    "ThresholdValue",
    "Verdict",
    "build_primitive",
    "build_ttt",
    "build_tug",
    "build_ult",
    "combine",
    "compare_holdings",
    "optimal_action",
    "outcome",
    "random_turn_value",
    "reverse",
    "richman_bounded",
    "richman_finite",
    "solve_chip_states",
    "solve_restricted",
    "threshold_bounded",
    "truncate",
    "wedge",
]
