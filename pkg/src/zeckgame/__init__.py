"""Exact engine and perfect-play coalition solver for the Zeckendorf game."""

from .engine import (
    COMBINE_ONES,
    SPLIT_TWOS,
    GameOverError,
    GameState,
    IllegalMoveError,
    Move,
    SeatingConfig,
    Session,
    apply_move,
    combine_adjacent,
    initial_state,
    is_terminal,
    legal_moves,
    new_session,
    parse_move,
    player_for_turn,
    session_apply,
    split_pair,
    successors,
)
from .fibzeck import Decomposition, fib_value, is_zeckendorf, max_index, zeckendorf
from .solver import (
    BestMove,
    CapacityError,
    CoalitionSolver,
    NoMoveError,
    ReachabilityReport,
    SearchInvariantError,
    SolveOutcome,
    SolveStats,
    best_move,
    detect_steal_pattern,
    detect_steal_pattern_k,
    reachability,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "BestMove",
    "COMBINE_ONES",
    "CapacityError",
    "CoalitionSolver",
    "Decomposition",
    "GameOverError",
    "GameState",
    "IllegalMoveError",
    "Move",
    "NoMoveError",
    "ReachabilityReport",
    "SPLIT_TWOS",
    "SearchInvariantError",
    "SeatingConfig",
    "Session",
    "SolveOutcome",
    "SolveStats",
    "apply_move",
    "best_move",
    "combine_adjacent",
    "detect_steal_pattern",
    "detect_steal_pattern_k",
    "fib_value",
    "initial_state",
    "is_terminal",
    "is_zeckendorf",
    "legal_moves",
    "max_index",
    "new_session",
    "parse_move",
    "player_for_turn",
    "reachability",
    "session_apply",
    "solve",
    "split_pair",
    "successors",
    "zeckendorf",
]
