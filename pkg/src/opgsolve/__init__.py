"""Pareto fronts of open parity games and compositional solving of their string diagrams."""
from .diagram import (
    Atom,
    FrontCache,
    Seq,
    Sum,
    operational_semantics,
    seq_compose,
    shortcut,
    solve_diagram,
    sum_compose,
    type_of,
)
from .dsl import SourceFile, format_source, parse_source
from .errors import (
    ArityError,
    InvalidGameError,
    OpgError,
    OracleBoundError,
    OrderError,
    ParseError,
    SolverInconsistency,
)
from .opg import (
    Classification,
    InterfaceType,
    OpenParityGame,
    ParetoFront,
    SolveStats,
    classify_entrance,
    enumerate_queries,
    loop_construction,
    solve_pareto_front,
    solve_pareto_fronts,
    validate_opg,
)
from .oracle import brute_force_pareto, enumerate_positional_strategies
from .orders import (
    BOT,
    TOP,
    Direction,
    EntranceRef,
    ExitAt,
    ExitRef,
    PrioritySpace,
    Query,
    ResultSet,
)
from .parity import ParityGame, Player, PositionalStrategy, evaluate_play, is_winning, solve_zielonka
from .report import Mode, SolveReport, emit_dot, emit_json, run_solve

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "Atom",
    "BOT",
    "Classification",
    "Direction",
    "EntranceRef",
    "ExitAt",
    "ExitRef",
    "FrontCache",
    "InterfaceType",
    "InvalidGameError",
    "Mode",
    "OpenParityGame",
    "OpgError",
    "OracleBoundError",
    "OrderError",
    "ParetoFront",
    "ParityGame",
    "ParseError",
    "Player",
    "PositionalStrategy",
    "PrioritySpace",
    "Query",
    "ResultSet",
    "Seq",
    "SolveReport",
    "SolveStats",
    "SolverInconsistency",
    "SourceFile",
    "Sum",
    "TOP",
    "brute_force_pareto",
    "classify_entrance",
    "emit_dot",
    "emit_json",
    "enumerate_positional_strategies",
    "enumerate_queries",
    "evaluate_play",
    "format_source",
    "is_winning",
    "loop_construction",
    "operational_semantics",
    "parse_source",
    "run_solve",
    "seq_compose",
    "shortcut",
    "solve_diagram",
    "solve_pareto_front",
    "solve_pareto_fronts",
    "solve_zielonka",
    "sum_compose",
    "type_of",
    "validate_opg",
]
