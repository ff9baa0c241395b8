"""
Pydantic schemas
"""
from .series import SeriesPoly

from .weights import (
    WeightSpec,
    RemainderReport,
    LowerRatioCheck,
    RatioBoundsCheck,
    UpperSumCheck,
    SandwichCheck,
    CoefficientEstimate,
)

from .permutations import (
    CycleType,
    CycleCount,
    MultiplicativeSpec,
    AdditiveSpec,
    DistTable,
)

from .clt import (
    CltStats,
    GapReport,
    DeltaBoundReport,
    ExpansionResidualReport,
    EUBoundReport,
    LogDifferenceCheck,
    MeanVsMReport,
    SumpnReport,
    GoncharovPoint,
)

from .checks import FitResult, SuiteResult
from .run import CommandEnum, FormatEnum, RunConfig

__all__ = [
    # Series
    "SeriesPoly",
    # Weights
    "WeightSpec",
    "RemainderReport",
    "LowerRatioCheck",
    "RatioBoundsCheck",
    "UpperSumCheck",
    "SandwichCheck",
    "CoefficientEstimate",
    # Permutations
    "CycleType",
    "CycleCount",
    "MultiplicativeSpec",
    "AdditiveSpec",
    "DistTable",
    # Limit laws
    "CltStats",
    "GapReport",
    "DeltaBoundReport",
    "ExpansionResidualReport",
    "EUBoundReport",
    "LogDifferenceCheck",
    "MeanVsMReport",
    "SumpnReport",
    "GoncharovPoint",
    # Checks and runs
    "FitResult",
    "SuiteResult",
    "CommandEnum",
    "FormatEnum",
    "RunConfig",
]
