"""Symbolic NIP classification of henselian valued fields."""

from .dsl import parse_descriptor, parse_valued_field
from .errors import DescriptorError, NipvalError, ParseError, PreconditionError, UnsupportedCut

__version__ = "0.1.0"

__all__ = [
    "DescriptorError",
    "NipvalError",
    "ParseError",
    "PreconditionError",
    "UnsupportedCut",
    "parse_descriptor",
    "parse_valued_field",
]
