"""Exception hierarchy shared by every package in the solver suite."""


class CSCError(Exception):
    """Base class for all solver-suite errors."""


class DimensionError(CSCError, ValueError):
    """Array shapes of a signal, dictionary or code do not agree."""


class ConfigurationError(CSCError, ValueError):
    """A parameter is outside its admissible range."""


class FormatError(CSCError, ValueError):
    """A CSC1 or CSV file could not be decoded."""


class ProtocolViolation(CSCError, RuntimeError):
    """The DICOD message protocol was broken (usually a partition bug)."""


class WorkerFailure(ProtocolViolation):
    """A free-running DICOD worker died or raised."""

    def __init__(self, worker: int, diagnostic: str):
        super().__init__(f"worker {worker} failed: {diagnostic}")
        self.worker = worker
        self.diagnostic = diagnostic
