"""Exception hierarchy shared by the engine, service, and CLI."""

from __future__ import annotations


class BitextHubError(Exception):
    """Base class for everything this package raises on purpose."""


class DataError(BitextHubError):
    """Invalid input data: bad files, bad arguments, violated preconditions."""


class StoreError(BitextHubError):
    """The persistent store is unusable (unreadable directory, bad snapshot)."""


class EngineError(DataError):
    """Engine precondition failure with a machine-readable reason code."""

    def __init__(self, reason: str, message: str | None = None):
        self.reason = reason
        super().__init__(message or reason)
