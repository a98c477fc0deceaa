"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class WrcommError(Exception):
    pass


class SignatureError(WrcommError, ValueError):
    """Arity signature invalid, or operands carry different signatures."""


class AddressError(WrcommError, ValueError):
    pass


class NotInSubgroupError(WrcommError, ValueError):
    """An element failed a membership precondition.

    ``reason`` names the first failing level/parity condition.
    """

    def __init__(self, message: str, reason: str = ""):
        super().__init__(message if not reason else f"{message}: {reason}")
        self.reason = reason


class InvariantViolation(WrcommError, AssertionError):
    """Two independent computations disagreed, or a witness failed re-verification.

    This always indicates a bug, never bad input.
    """


class GuardExceeded(WrcommError, RuntimeError):
    """A brute-force computation would exceed the configured size guard."""


class ParseError(WrcommError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset
        self.bare_message = message
