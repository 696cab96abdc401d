"""Exception types shared across the package."""


class GdrwError(Exception):
    """Base class for errors raised by this package."""


class ParseError(GdrwError, ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class FormatError(GdrwError, ValueError):
    """Corrupt or unrecognized binary graph file."""


class ConfigError(GdrwError, ValueError):
    """Invalid configuration value (probabilities, burst sizes, app params)."""


class SamplingError(GdrwError, ValueError):
    """No sample can be drawn (e.g. every weight is zero)."""


class TraceValidationError(GdrwError, ValueError):
    """Walk results do not match the graph they are replayed against."""
