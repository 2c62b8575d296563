"""Entropy-based energy dissipation models for mobile communication systems.

Three layers: exact entropy-flow accounting for small stochastic logic
circuits (:mod:`thermocomm.circuit`), FLO-count dissipation of baseband
processing (:mod:`thermocomm.processing`), and measurement-erasure
dissipation of the analog chain (:mod:`thermocomm.transmission`).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    EnumerationLimitError,
    InfiniteRelativeEntropyError,
    NetlistError,
    ValidationError,
)
from .thermo import (  # noqa: E402
    BOLTZMANN,
    NAND_UNIFORM_FLOW,
    Distribution,
    EntropyAccount,
    PhysicalContext,
    heat_from_entropy_flow,
    landauer_limit,
    relative_entropy,
    shannon_entropy,
)

__all__ = [
    "__version__",
    "ValidationError", "InfiniteRelativeEntropyError", "NetlistError", "EnumerationLimitError",
    "BOLTZMANN", "NAND_UNIFORM_FLOW", "Distribution", "EntropyAccount", "PhysicalContext",
    "heat_from_entropy_flow", "landauer_limit", "relative_entropy", "shannon_entropy",
]
