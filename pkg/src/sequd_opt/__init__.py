"""Uniform-design construction and sequential uniform-design optimization."""

from .augud import AugudConfig, AugudResult, construct_ud, run_augud
from .design import (
    Cd2Cache,
    UnitDesign,
    UTypeDesign,
    cd2,
    cd2_combined,
    cd2_squared,
    random_balanced,
    to_unit,
)
from .sequd import History, SequdConfig, run_seqrand, run_sequd
from .space import ParamSpec, SearchSpace

__all__ = [
    "AugudConfig",
    "AugudResult",
    "Cd2Cache",
    "History",
    "ParamSpec",
    "SearchSpace",
    "SequdConfig",
    "UTypeDesign",
    "UnitDesign",
    "cd2",
    "cd2_combined",
    "cd2_squared",
    "construct_ud",
    "random_balanced",
    "run_augud",
    "run_seqrand",
    "run_sequd",
    "to_unit",
]

__version__ = "0.1.0"
