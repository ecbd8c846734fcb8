"""Exception types raised across the package."""

from __future__ import annotations


class NipvalError(Exception):
    """Base class for every error raised by nipval."""


class DescriptorError(NipvalError, ValueError):
    """A descriptor (group, field, valued field) fails its consistency rules."""


class MembershipError(DescriptorError):
    """A coordinate does not belong to the summand it is placed in."""


class UnsupportedCut(NipvalError, ValueError):
    """A coarsening was requested at a cut with no descriptor-level factorization."""


class PreconditionError(NipvalError, ValueError):
    """An operation was called outside its domain."""


class ParseError(NipvalError, ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{self.line}:{self.column}: {message}")
        self.message = message


class UnsupportedExtension(NipvalError, ValueError):
    """An extension outside the tame catalogue the oracle can certify."""
