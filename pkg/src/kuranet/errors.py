"""Exception taxonomy.

The CLI maps these onto exit codes: ConfigError -> 2, SimulationError
(and subclasses) -> 3, AcceptanceError -> 4.
"""


class KuranetError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(KuranetError):
    """Invalid scenario/sweep configuration or input file."""


class AdjacencyParseError(ConfigError):
    """Malformed adjacency file."""


class NetworkValidationError(ConfigError):
    """Adjacency violates the simple-undirected-graph invariants."""


class PreconditionError(KuranetError):
    """An operation was called outside its stated preconditions."""


class SimulationError(KuranetError):
    """A run aborted mid-integration."""


class DegenerateMagnitudeError(SimulationError):
    """A complex state component fell below the 1e-12 modulus guard,
    so its argument (and the coupling fields) are ill-defined."""


class UnwrapAmbiguityError(SimulationError):
    """A per-step phase change hit the +/-pi boundary where the
    continuous lift is ambiguous; the integrator step is too large."""


class NonFiniteStateError(SimulationError):
    """NaN/Inf appeared in the integrated state."""


class MatExpOverflowError(SimulationError):
    """Non-finite intermediate in the matrix-exponential scaling stage."""


class EigenConvergenceError(SimulationError):
    """QR iteration failed to deflate within the sweep budget."""


class MetricsError(KuranetError):
    """Metric requested on inputs that do not support it (e.g. phase
    error between runs with unmatched initial phases)."""


class AcceptanceError(KuranetError):
    """A run violated a hard theoretical guarantee it asserted
    (e.g. measured reaching time above the proven bound)."""
