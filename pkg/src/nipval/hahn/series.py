"""Finite-support generalized power series ``sum c_g t^g`` with exponents in an OAGDesc."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from ..errors import PreconditionError
from ..oag import INFINITY, GroupElement, OAGDesc, has_min_positive
from .coeffs import QQ


class ValRes(NamedTuple):
    v: object  # GroupElement or INFINITY
    res: object


def _normalize(terms, field) -> tuple:
    acc: dict = {}
    for g, c in terms:
        c = field.coerce(c)
        acc[g] = acc[g] + c if g in acc else c
    return tuple(sorted(((g, c) for g, c in acc.items() if c != 0), key=lambda gc: gc[0]))


@dataclass(frozen=True, eq=False)
class HahnSeries:
    group: OAGDesc
    field: object
    terms: tuple = ()

    def __post_init__(self):
        for g, _ in self.terms:
            if not self.group.contains(g):
                raise ValueError(f"exponent {g} is not in {self.group}")
        object.__setattr__(self, "terms", _normalize(self.terms, self.field))

    # -- constructors
    @classmethod
    def zero(cls, group: OAGDesc, field=QQ) -> "HahnSeries":
        return cls(group, field, ())

    @classmethod
    def const(cls, c, group: OAGDesc, field=QQ) -> "HahnSeries":
        return cls(group, field, ((group.zero(), c),))

    @classmethod
    def monomial(cls, c, exponent, group: OAGDesc, field=QQ) -> "HahnSeries":
        g = exponent if isinstance(exponent, GroupElement) else group.element(exponent)
        return cls(group, field, ((g, c),))

    # -- arithmetic
    def _same(self, other: "HahnSeries") -> None:
        if other.group != self.group:
            raise PreconditionError(f"group mismatch: {self.group} vs {other.group}")
        if other.field != self.field:
            raise PreconditionError(f"coefficient field mismatch: {self.field.name} vs {other.field.name}")

    def _lift(self, other) -> "HahnSeries":
        if isinstance(other, HahnSeries):
            self._same(other)
            return other
        return HahnSeries.const(other, self.group, self.field)

    def __add__(self, other) -> "HahnSeries":
        other = self._lift(other)
        return HahnSeries(self.group, self.field, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "HahnSeries":
        return HahnSeries(self.group, self.field, tuple((g, -c) for g, c in self.terms))

    def __sub__(self, other) -> "HahnSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "HahnSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "HahnSeries":
        other = self._lift(other)
        prod = [(g + h, a * b) for g, a in self.terms for h, b in other.terms]
        return HahnSeries(self.group, self.field, tuple(prod))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HahnSeries":
        if k < 0:
            raise PreconditionError("negative powers need invert_trunc")
        out = HahnSeries.const(1, self.group, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, HahnSeries):
            try:
                other = self._lift(other)
            except (TypeError, ValueError, ZeroDivisionError):
                return NotImplemented
        return self.group == other.group and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, self.field, self.terms))

    # -- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self):
        return self.terms[0][0] if self.terms else INFINITY

    def coefficient(self, g) -> object:
        g = g if isinstance(g, GroupElement) else self.group.element(g)
        for h, c in self.terms:
            if h == g:
                return c
        return self.field.zero

    def support(self) -> tuple:
        return tuple(g for g, _ in self.terms)

    def truncate(self, bound: GroupElement) -> "HahnSeries":
        """Drop the terms with exponent above ``bound``."""
        return HahnSeries(self.group, self.field, tuple((g, c) for g, c in self.terms if not bound < g))

    def scale_exponent(self, g: GroupElement) -> "HahnSeries":
        return HahnSeries(self.group, self.field, tuple((h + g, c) for h, c in self.terms))

    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        return f"HahnSeries({self.group}, {self.field.name}, {self})"


def arith(x: HahnSeries, y: HahnSeries) -> dict:
    return {"sum": x + y, "product": x * y, "negation": -x}


def val_res(x: HahnSeries) -> ValRes:
    """Valuation and residue; the residue of an element of negative valuation is 0."""
    if x.is_zero():
        return ValRes(INFINITY, x.field.zero)
    v = x.valuation()
    if v.sign() < 0:
        return ValRes(v, x.field.zero)
    return ValRes(v, x.coefficient(x.group.zero()))


def default_gauge(group: OAGDesc) -> GroupElement:
    """The minimum positive element, when the group has one."""
    if group.is_trivial:
        raise PreconditionError("the trivial group has no positive gauge element")
    if not has_min_positive(group):
        raise PreconditionError(f"{group} has no minimum positive element; supply a gauge")
    return group.unit(group.rank - 1)


def _gauge(group: OAGDesc, gauge: Optional[GroupElement]) -> GroupElement:
    if gauge is None:
        return default_gauge(group)
    if not group.contains(gauge) or gauge.sign() <= 0:
        raise PreconditionError(f"gauge {gauge} must be a positive element of {group}")
    return gauge


def invert_to(x: HahnSeries, bound: GroupElement) -> HahnSeries:
    """``y`` with ``v(x*y - 1) > bound`` (``bound >= 0``)."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of the zero series")
    a, c = x.terms[0]
    head_inv = HahnSeries(x.group, x.field, ((-a, x.field.one / c),))
    u = x * head_inv - 1  # x = c t^a (1 + u), v(u) > 0
    if u.is_zero():
        return head_inv
    vu = u.valuation()
    if bound.sign() > 0 and vu.leading_index() > bound.leading_index():
        raise PreconditionError(
            f"v(x/lead - 1) = {vu} is infinitesimal relative to the bound {bound}; no finite truncation reaches it"
        )
    # geometric series sum_{k<=m} (-u)^k, truncated above the bound
    total = HahnSeries.const(1, x.group, x.field)
    power = HahnSeries.const(1, x.group, x.field)
    neg_u = -u
    reached = vu
    while not bound < reached:
        power = (power * neg_u).truncate(bound)
        total = total + power
        reached = reached + vu
    return total * head_inv


def invert_trunc(x: HahnSeries, N: int, gauge: Optional[GroupElement] = None) -> HahnSeries:
    """Truncated inverse: ``v(x*y - 1) > N*g`` for the gauge ``g``."""
    g = _gauge(x.group, gauge)
    if N < 0:
        raise PreconditionError("the truncation multiplier N must be non-negative")
    return invert_to(x, g * N)


# ---------------------------------------------------------------- text form


def _format_exponent(g: GroupElement) -> str:
    if len(g.coords) == 1:
        c = g.coords[0]
        return str(c) if c.denominator == 1 and c >= 0 else f"({c})"
    return "(" + ",".join(str(c) for c in g.coords) + ")"


def format_series(x: HahnSeries) -> str:
    if x.is_zero():
        return "0"
    out = []
    for g, c in x.terms:
        s = str(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        if "+" in s or ("/" in s and not g.is_zero()):
            s = f"({s})"
        if g.is_zero():
            body = s
        else:
            mono = "t" if g.coords == (1,) else f"t^{_format_exponent(g)}"
            body = mono if s == "1" else f"{s}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
