"""Exception hierarchy shared across the package."""


class InfoChessError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(InfoChessError):
    """Invalid game or training configuration."""


class RulesError(InfoChessError):
    """An action that violates the movement rules. Never silently corrected."""


class SequencingError(InfoChessError):
    """An operation issued out of turn, out of phase, or after game end."""


class ValidationError(InfoChessError):
    """Malformed input data, e.g. a belief that does not sum to one."""


class ModelError(InfoChessError):
    """Missing model parameters, shape mismatch, or non-finite outputs."""


class ReplayError(InfoChessError):
    """A game record diverged from the rules during replay.

    ``turn_index`` is the 0-based half-turn at which the divergence was
    detected, or None when the record itself is malformed.
    """

    def __init__(self, message: str, turn_index: int | None = None):
        super().__init__(message)
        self.turn_index = turn_index


class SessionGoneError(InfoChessError):
    """The referenced play session expired or never existed."""
