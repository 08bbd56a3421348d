"""Exact double-game analysis: local and Bayesian equilibria, regularity and tournaments."""

from .errors import (
    ContractViolation,
    DegenerateInterpolation,
    GameError,
    InvalidInput,
    SocialParamsError,
)
from .games import (
    MixedEquilibria,
    NormalFormGame,
    best_responses,
    expected_payoff,
    format_rational,
    is_pure_nash,
    mixed_nash_2x2,
    parse_rational,
    payoff,
    pure_nash,
)
from .intervals import Interval
from .multigame import (
    DoubleGame,
    MultiGame,
    RegionDiagram,
    TypeGrid,
    br_interval,
    compose,
    instantiate,
    interpolate_dg,
    local_ne,
    mixed_interpolate,
    ne_region,
    region_diagram,
)
from .regularity import (
    BayesianPureProfile,
    EvalCounter,
    RegularityResult,
    TypePrior,
    certificate_is_sound,
    coherent_pairs,
    completely_pure_regular,
    is_pure_regular,
    ne_table,
    threshold,
    verify_bayes_ne,
)
from .social import (
    CaseTag,
    CrossingPoints,
    SocialParams,
    build_dg,
    classify_case,
    crossing_points,
    example_grid,
    prisoners_dilemma,
    social_game,
)
from .tournament import (
    SEG,
    AllC,
    AllD,
    MatchRecord,
    Strategy,
    TitForTat,
    TournamentResult,
    play_match,
    register_strategy,
    run_tournament,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
