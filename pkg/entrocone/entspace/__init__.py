"""Entropy vectors, information inequalities and the distributions behind them."""

from entspace.coords import (
    CoordSystem,
    EntropySpaceError,
    EntropyVector,
    MissingCoordinateError,
)
from entspace.distribution import (
    DistributionError,
    JointDistribution,
    entropy_vector,
    ingleton_quantity,
    interaction_information,
)
from entspace.expressions import (
    EntropyExpr,
    H,
    cond_entropy,
    interaction_info,
    mutual_info,
)
from entspace.shannon import shannon_elemental
from entspace.strategy import Strategy, StrategyError, parse_strategy, strategy_eval

__all__ = [
    "CoordSystem",
    "DistributionError",
    "EntropyExpr",
    "EntropySpaceError",
    "EntropyVector",
    "H",
    "JointDistribution",
    "MissingCoordinateError",
    "Strategy",
    "StrategyError",
    "cond_entropy",
    "entropy_vector",
    "ingleton_quantity",
    "interaction_info",
    "interaction_information",
    "mutual_info",
    "parse_strategy",
    "shannon_elemental",
    "strategy_eval",
]
