"""Engine error types surfaced through the CLI and service layer."""


class SzoomError(Exception):
    """Base class for all engine-level failures."""


class ConfigError(SzoomError):
    """Invalid configuration file or parameter combination."""


class DetectionStreamError(SzoomError):
    """Malformed detection stream; carries the offending location."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class InputError(SzoomError):
    """Unreadable or inconsistent input frames / masks."""
