"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A model, channel, or policy parameter violates its constraints."""


class ConfigError(Exception):
    """An experiment config file is missing, malformed, or invalid."""


class InfeasibleDesignError(Exception):
    """The requested noise-probability design has no valid solution."""


class TruncationError(RuntimeError):
    """A truncated chain sum dropped more probability mass than allowed."""
