"""Contains all the netcoherence Exception classes."""
from .const import EXIT_DATA, EXIT_NUMERICAL, EXIT_USAGE


class NetCoherenceError(Exception):
    """Base class, status is the command line exit code."""

    def __init__(self, status, message):
        """Initialize."""
        super().__init__(status, message)
        self.status = status
        self.message = message

    def __str__(self):
        return self.message


class NetCoherenceUsageError(NetCoherenceError):
    """Raised when parameters fall outside their documented domain."""

    def __init__(self, message):
        """Initialize."""
        super().__init__(EXIT_USAGE, message)


class NetCoherenceParseError(NetCoherenceError):
    """Raised when an edge list line cannot be parsed."""

    def __init__(self, line, message):
        """Initialize."""
        super().__init__(EXIT_DATA, f"line {line}: {message}")
        self.line = line


class NetCoherenceEmptyGraphError(NetCoherenceError):
    """Raised when an edge list holds no usable edge."""

    def __init__(self, message="no usable edges"):
        """Initialize."""
        super().__init__(EXIT_DATA, message)


class NetCoherenceConnectivityError(NetCoherenceError):
    """Raised when a connected graph is required."""

    def __init__(self, message, components=None):
        """Initialize."""
        super().__init__(EXIT_DATA, message)
        self.components = components


class NetCoherenceDegenerateGraphError(NetCoherenceError):
    """Raised for single vertex graphs where two or more are needed."""

    def __init__(self, message):
        """Initialize."""
        super().__init__(EXIT_DATA, message)


class NetCoherenceBoundsError(NetCoherenceError):
    """Raised when a vertex id is out of range."""

    def __init__(self, vertex, n):
        """Initialize."""
        super().__init__(EXIT_DATA, f"vertex {vertex} out of range 0..{n - 1}")
        self.vertex = vertex


class NetCoherenceCapacityError(NetCoherenceError):
    """Raised when a deterministic family would grow past the capacity."""

    def __init__(self, message):
        """Initialize."""
        super().__init__(EXIT_DATA, message)


class NetCoherenceDimensionError(NetCoherenceError):
    """Raised when a resistance matrix does not fit the growth map."""

    def __init__(self, message):
        """Initialize."""
        super().__init__(EXIT_DATA, message)


class NetCoherenceNumericalError(NetCoherenceError):
    """Raised when a numerical routine fails or leaves a large residual."""

    def __init__(self, message, residual=float("nan")):
        """Initialize."""
        super().__init__(EXIT_NUMERICAL, f"{message} (residual {residual:.3e})")
        self.residual = residual


class NetCoherenceStabilityError(NetCoherenceError):
    """Raised when a simulated state blows up."""

    def __init__(self, message):
        """Initialize."""
        super().__init__(EXIT_NUMERICAL, message)
