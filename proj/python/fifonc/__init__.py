from ._core import (
    ArgumentError,
    ConcaveCurve,
    ContractError,
    ConvexCurve,
    DomainError,
    InstabilityError,
    ParseError,
    ResidualInput,
    Scenario,
    SolveResult,
    aggregate_backlog,
    backlog_bound,
    exact_theta_opt,
    generate_scenario,
    heuristic_theta_opt,
    heuristic_trace,
    horizontal_deviation,
    oracle_search,
    segregation_penalty,
    solve_disco,
    theta_disco,
    vertical_deviation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
