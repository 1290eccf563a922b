"""Exception hierarchy shared across the package."""


class RiverCommonsError(Exception):
    """Base class for all package errors."""


class ConfigurationError(RiverCommonsError):
    """Invalid or inconsistent run configuration."""


class InvalidGameError(RiverCommonsError):
    """Malformed game (dimension mismatch, non-finite payoffs, bad label)."""


class SchemaError(RiverCommonsError):
    """Text that should carry structured content could not be parsed.

    Carries the offending text so the caller can decide whether to retry.
    """

    def __init__(self, message, text=None):
        super().__init__(message)
        self.text = text


class TemplateError(RiverCommonsError):
    """Prompt template rendered with missing variables."""

    def __init__(self, missing):
        self.missing = tuple(sorted(missing))
        super().__init__("unresolved placeholders: " + ", ".join(self.missing))


class TransportError(RiverCommonsError):
    """Chat-completion backend failed after all retries."""


class SimulationError(RiverCommonsError):
    """Fatal error inside a simulation run, annotated with context."""

    def __init__(self, message, year=None, household=None, pair=None):
        self.year = year
        self.household = household
        self.pair = pair
        ctx = [f"{k}={v}" for k, v in
               (("year", year), ("household", household), ("pair", pair))
               if v is not None]
        super().__init__(message + (f" [{', '.join(ctx)}]" if ctx else ""))
