"""Exception hierarchy shared by the library and the command line.

Every error carries a short ``kind`` string; the CLI prints failures as
``error: <kind>: <detail>`` on a single line.
"""
from __future__ import annotations


class HafsamplerError(Exception):
    """Base class for all errors raised by hafsampler."""

    kind = "error"

    @property
    def detail(self) -> str:
        return str(self)


class GraphFormatError(HafsamplerError, ValueError):
    """A graph, matrix or weight file could not be parsed."""

    kind = "parse"

    def __init__(self, message: str, path: str | None = None,
                 line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(f"{where}{message}")


class GraphValidationError(HafsamplerError, ValueError):
    """Input violates a Graph, VertexWeights or Subset invariant."""

    kind = "invalid-graph"


class OddSectorError(HafsamplerError, ValueError):
    """A hafnian-based sampler was asked for an odd number of vertices."""

    kind = "odd-size sector"


class EmptySectorError(HafsamplerError):
    """No k-subset carries any probability mass."""

    kind = "empty-sector"


class BudgetExceededError(HafsamplerError):
    """A computation would exceed a configured size or work budget."""

    kind = "budget"


class RejectionLimitError(HafsamplerError):
    """Rejection sampling ran out of attempts."""

    kind = "rejection-limit"

    def __init__(self, attempts: int, accepted: int, requested: int):
        self.attempts = attempts
        self.accepted = accepted
        self.requested = requested
        self.acceptance_rate = accepted / attempts if attempts else 0.0
        if accepted:
            rate = f"measured acceptance rate {self.acceptance_rate:.3g}"
        else:
            rate = f"acceptance rate below {1.0 / max(attempts, 1):.3g}"
        super().__init__(
            f"accepted {accepted} of {requested} requested samples after "
            f"{attempts} attempts ({rate})")


class CalibrationError(HafsamplerError, ValueError):
    """Mean-photon calibration could not reach the target."""

    kind = "calibration"


class ConfigError(HafsamplerError, ValueError):
    """Unknown or malformed configuration value."""

    kind = "config"


class UsageError(HafsamplerError):
    """Bad command-line arguments."""

    kind = "usage"
