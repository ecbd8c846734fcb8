"""Kleene three-valued logic on ``True`` / ``False`` / ``None`` (unknown)."""

from __future__ import annotations

from typing import Iterable, Optional

Tri = Optional[bool]


def and3(*values: Tri) -> Tri:
    result: Tri = True
    for v in values:
        if v is False:
            return False
        if v is None:
            result = None
    return result


def or3(*values: Tri) -> Tri:
    result: Tri = False
    for v in values:
        if v is True:
            return True
        if v is None:
            result = None
    return result


def not3(value: Tri) -> Tri:
    return None if value is None else not value


def all3(values: Iterable[Tri]) -> Tri:
    return and3(*values)


def show(value: Tri) -> str:
    return {True: "true", False: "false", None: "unknown"}[value]


def parse_tri(text: str) -> Tri:
    t = text.strip().lower()
    if t in ("true", "t", "yes", "1"):
        return True
    if t in ("false", "f", "no", "0"):
        return False
    if t in ("unknown", "?", "none", "u"):
        return None
    raise ValueError(f"not a three-valued literal: {text!r}")
