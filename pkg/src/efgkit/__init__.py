"""Solvers for two-player zero-sum imperfect-information games.

Games are described by history functions (:class:`Game`) and compiled once
into flat trees for the solvers.  Exact evaluation and vanilla CFR live in
:mod:`efgkit.exact`, outcome-sampling MCCFR in :mod:`efgkit.mccfr`,
information-set UCT in :mod:`efgkit.mcts` and restricted Nash responses in
:mod:`efgkit.rnr`.
"""

from .core import (
    BehaviorStrategy,
    Game,
    InfoSetKey,
    Player,
    StrategyProfile,
    expected_value,
    reach_probability,
    tail_probability,
)
from .errors import (
    EfgError,
    EnumerationBudgetError,
    GameMismatchError,
    IncompleteModelError,
    InvalidHistoryError,
    ParameterError,
    StrategyFormatError,
)
from .exact import (
    CfrState,
    best_response,
    cfr_iteration,
    dominated_error,
    exploitability,
    immediate_regrets,
    kuhn_parameters,
    kuhn_squared_error,
    run_cfr,
)
from .games import parse_game
from .mccfr import MccfrConfig, RegretTables, average_strategy, mccfr_iteration, regret_matching, run_mccfr
from .mcts import MctsConfig, UctTables, extract_visit_strategy, mcts_iteration, run_mcts, uct_select
from .records import RunRecord
from .rnr import (
    RestrictionSpec,
    RnrProfile,
    TradeoffPoint,
    convergence_compare,
    mcrnr_iteration,
    run_mcrnr,
    solve_rnr_exact,
    tradeoff_sweep,
    transform_rnr_game,
)
from .strategy_file import load_profile, save_profile
from .tree import GameTree, build_tree

__version__ = "0.1.0"

__all__ = [
    "BehaviorStrategy",
    "CfrState",
    "EfgError",
    "EnumerationBudgetError",
    "Game",
    "GameMismatchError",
    "GameTree",
    "IncompleteModelError",
    "InfoSetKey",
    "InvalidHistoryError",
    "MccfrConfig",
    "MctsConfig",
    "ParameterError",
    "Player",
    "RegretTables",
    "RestrictionSpec",
    "RnrProfile",
    "RunRecord",
    "StrategyFormatError",
    "StrategyProfile",
    "TradeoffPoint",
    "UctTables",
    "average_strategy",
    "best_response",
    "build_tree",
    "cfr_iteration",
    "convergence_compare",
    "dominated_error",
    "expected_value",
    "exploitability",
    "extract_visit_strategy",
    "immediate_regrets",
    "kuhn_parameters",
    "kuhn_squared_error",
    "load_profile",
    "mccfr_iteration",
    "mcrnr_iteration",
    "mcts_iteration",
    "parse_game",
    "reach_probability",
    "regret_matching",
    "run_cfr",
    "run_mccfr",
    "run_mcrnr",
    "run_mcts",
    "save_profile",
    "solve_rnr_exact",
    "tail_probability",
    "tradeoff_sweep",
    "transform_rnr_game",
    "uct_select",
]
