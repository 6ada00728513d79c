"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value or malformed config file."""


class CorpusFormatError(ValueError):
    """Corpus or ingest file violates the line format; message names the line."""


class StreamOrderError(RuntimeError):
    """Batches were delivered to a detector out of day order."""


class UnreachableTargetError(ValueError):
    """Divergence calibration target exceeds what the topic pair can reach."""

    def __init__(self, target: float, achievable: float):
        super().__init__(
            f"target divergence {target:g} unreachable; maximum achievable is {achievable:g}"
        )
        self.target = target
        self.achievable = achievable
