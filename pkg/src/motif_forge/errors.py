"""Exception types that map onto CLI exit codes."""


class ConfigError(ValueError):
    """Invalid configuration; ``path`` locates the offending JSON field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class DataError(ValueError):
    """Unreadable or invalid input data."""
