"""Secretary algorithms that see only the order of weights, never the values."""

from .core import (
    EVALUATION_KEY,
    ArrivalSequence,
    HiddenWeightStore,
    OrdinalOracle,
    advance,
    compare,
    mix64,
    rank_prefix,
    sample_arrival,
)
from .errors import (
    CapabilityError,
    ContractError,
    EmptyInstanceError,
    EmptyPrefixError,
    ExhaustedError,
    FeasibilityError,
    InformationLeakError,
    OrdsecError,
    ParameterError,
    SolverError,
)

__version__ = "0.1.0"
