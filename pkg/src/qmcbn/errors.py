"""Exception types shared across the package."""


class QmcbnError(Exception):
    """Base class for all package-specific errors."""


class ParseError(QmcbnError, ValueError):
    """Malformed input text (network, evidence, ICPT, direction-number or point file)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedDimensionError(QmcbnError, ValueError):
    """Requested dimension exceeds what the embedded tables support."""


class IndexOverflowError(QmcbnError, ValueError):
    """Sequence index outside the generator's capacity."""


class SequenceExhaustedError(QmcbnError, RuntimeError):
    """A stateful stream ran past its last representable point."""


class TooLargeError(QmcbnError, ValueError):
    """Input exceeds a cost guard (state space, point count)."""


class ImpossibleEvidenceError(QmcbnError, ValueError):
    """Evidence has probability zero under the network."""


class DegenerateEstimateError(QmcbnError, RuntimeError):
    """Every importance weight in a batch was zero; no estimate exists."""


class SupportViolationError(QmcbnError, ValueError):
    """Importance function assigns zero probability to a positive-probability event."""
