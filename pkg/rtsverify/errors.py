from __future__ import annotations

from typing import Optional


class RtsError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1
    http_status = 500


class UsageError(RtsError):
    """Caller handed us something malformed: unknown symbol, alphabet mismatch, bad spec."""

    exit_code = 2
    http_status = 400


class ParseError(UsageError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ConfigurationError(UsageError):
    """A guard (enumeration bound, generator size, views bound) was exceeded."""


class UnsupportedInstanceError(RtsError):
    exit_code = 3
    http_status = 422


class IterationLimitError(RtsError):
    exit_code = 4
    http_status = 500


def alphabet_mismatch(left, right, what: str = "operation") -> UsageError:
    return UsageError(
        f"alphabet mismatch in {what}: '{left.name}' {list(left.symbols)} vs '{right.name}' {list(right.symbols)}"
    )
