"""Exception hierarchy shared by the simulator, analysis and CLI layers."""


class QThermoError(Exception):
    """Base class for all package errors."""


class ConfigError(QThermoError, ValueError):
    """An input parameter is out of range or malformed.

    ``field`` names the offending parameter when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class SimulationError(QThermoError, RuntimeError):
    """Internal inconsistency in the statevector engine (bad index, non-unitary gate)."""


class AnalysisError(QThermoError, ValueError):
    """A table cannot be analysed (degenerate norm, too few grid points, mismatched configs)."""
