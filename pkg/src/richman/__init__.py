"""Solver and simulator for bidding games on finite directed graphs.

Two players hold money and bid for each move of a token; the bid winner
pays the loser and moves.  Every vertex has an exact rational cost — the
share of the total money Blue needs to force a win — and this package
computes those costs, plays the strategies built from them, and prices
the even-money betting ladder they induce.
"""

from .agents import (
    AGENT_NAMES,
    Agent,
    BidDecision,
    FullKnowledgeAgent,
    GameState,
    PlayerView,
    SafetyRatioAgent,
    UniformRandomBidAgent,
    full_knowledge_agent,
    make_agent,
    optimal_bid,
    random_turn_optimal_move,
    safety_ratio,
    safety_ratio_agent,
)
from .graphs import (
    GameGraph,
    GraphFormatError,
    ValidationReport,
    Violation,
    parse_game_graph,
    serialize_game_graph,
    validate,
)
from .series import (
    BankrollMismatchError,
    BetPlan,
    SeriesSpec,
    build_series_graph,
    series_bet_plan,
    state_id,
)
from .simulate import (
    BatchStats,
    GameRecord,
    ProtocolViolationError,
    RandomTurnStats,
    Step,
    batch_records,
    default_move_cap,
    derived_rng,
    derived_seed,
    estimate_random_turn_value,
    format_trace,
    play_random_turn_game,
    play_richman_game,
    random_turn_move_cap,
    random_turn_stats,
    run_batch,
)
from .solver import (
    ApproxSolve,
    CostTable,
    LimitExceededError,
    NotConvergedError,
    Policy,
    SolverError,
    descent_distances,
    extremal_successors,
    iterate_above,
    iterate_below,
    rationalize,
    satisfies_exact_identity,
    solve_exact,
    solve_exact_by_enumeration,
    solve_iterative,
    steepest_descent_closure,
)

__version__ = "0.1.0"

__all__ = [
    "AGENT_NAMES",
    "Agent",
    "ApproxSolve",
    "BankrollMismatchError",
    "BatchStats",
    "BetPlan",
    "BidDecision",
    "CostTable",
    "FullKnowledgeAgent",
    "GameGraph",
    "GameRecord",
    "GameState",
    "GraphFormatError",
    "LimitExceededError",
    "NotConvergedError",
    "PlayerView",
    "Policy",
    "ProtocolViolationError",
    "RandomTurnStats",
    "SafetyRatioAgent",
    "SeriesSpec",
    "SolverError",
    "Step",
    "UniformRandomBidAgent",
    "ValidationReport",
    "Violation",
    "batch_records",
    "build_series_graph",
    "default_move_cap",
    "derived_rng",
    "derived_seed",
    "descent_distances",
    "estimate_random_turn_value",
    "extremal_successors",
    "format_trace",
    "full_knowledge_agent",
    "iterate_above",
    "iterate_below",
    "make_agent",
    "optimal_bid",
    "parse_game_graph",
    "play_random_turn_game",
    "play_richman_game",
    "random_turn_move_cap",
    "random_turn_optimal_move",
    "random_turn_stats",
    "rationalize",
    "run_batch",
    "safety_ratio",
    "safety_ratio_agent",
    "satisfies_exact_identity",
    "serialize_game_graph",
    "series_bet_plan",
    "solve_exact",
    "solve_exact_by_enumeration",
    "solve_iterative",
    "state_id",
    "steepest_descent_closure",
    "validate",
]
