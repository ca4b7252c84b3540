from ._core import (
    InvalidInput,
    NumericalFailure,
    ParseError,
    System,
    Unsupported,
    atomic_chains,
    classify,
    clebsch_gordan,
    infinite_time_probability,
    lz_probability,
    morris_shore,
    pcf,
    probabilities,
    propagator,
    two_state_propagator,
)

__all__ = [
    "InvalidInput",
    "NumericalFailure",
    "ParseError",
    "System",
    "Unsupported",
    "atomic_chains",
    "classify",
    "clebsch_gordan",
    "infinite_time_probability",
    "lz_probability",
    "morris_shore",
    "pcf",
    "probabilities",
    "propagator",
    "two_state_propagator",
]
