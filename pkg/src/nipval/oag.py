"""Ordered abelian groups given as finite lexicographic products of rank-1 summands.

A group is a list ``[A_1, ..., A_n]`` of archimedean summands, ``A_1`` most
significant.  Each summand is either the integers (``Discrete``) or a dense
subgroup of the rationals generated by ``1`` and ``1/q^m`` for ``q`` in a set of
primes (``Dense``).  Convex subgroups are exactly the suffixes of the list, so a
convex subgroup is named by a cut index ``c`` in ``0..n``: cut ``c`` is the
subgroup formed by summands ``c+1..n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, NamedTuple, Optional, Union

from sympy import factorint, isprime

from .errors import MembershipError, PreconditionError

NEG_INF = -math.inf

Rational = Union[int, Fraction, str]


def _prime(p: int) -> int:
    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def qval(q: int, r: Fraction) -> float:
    """q-adic valuation of a rational; ``inf`` for zero."""
    if r == 0:
        return math.inf
    v = 0
    n, d = r.numerator, r.denominator
    while n % q == 0:
        n //= q
        v += 1
    while d % q == 0:
        d //= q
        v -= 1
    return v


def _primes_of(r: Fraction) -> set[int]:
    out: set[int] = set()
    for m in (abs(r.numerator), r.denominator):
        if m > 1:
            out.update(factorint(m))
    return out


@dataclass(frozen=True)
class ArchSummand:
    """One archimedean component.

    ``primes`` is ``None`` for the full rationals; a discrete summand carries the
    empty set.
    """

    kind: str
    primes: Optional[frozenset] = frozenset()

    def __post_init__(self):
        if self.kind == "discrete":
            if self.primes != frozenset():
                raise ValueError("a discrete summand is divisible by no prime")
        elif self.kind == "dense":
            if self.primes is not None:
                if not self.primes:
                    raise ValueError("a dense summand needs at least one divisible prime or 'all'")
                for p in self.primes:
                    _prime(p)
        else:
            raise ValueError(f"unknown summand kind {self.kind!r}")

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"

    def divisible_by(self, p: int) -> bool:
        if self.kind == "discrete":
            return False
        return self.primes is None or p in self.primes

    def contains(self, r: Fraction) -> bool:
        r = Fraction(r)
        if self.kind == "discrete":
            return r.denominator == 1
        if self.primes is None:
            return True
        d = r.denominator
        for p in self.primes:
            while d % p == 0:
                d //= p
        return d == 1

    def __str__(self) -> str:
        if self.kind == "discrete":
            return "Z"
        if self.primes is None:
            return "Q"
        if len(self.primes) == 1:
            return f"Z[1/{next(iter(self.primes))}]"
        return "dense{" + ",".join(str(p) for p in sorted(self.primes)) + "}"


DISCRETE = ArchSummand("discrete")
RATIONALS = ArchSummand("dense", None)


def dense_summand(primes: Optional[Iterable[int]]) -> ArchSummand:
    return ArchSummand("dense", None if primes is None else frozenset(primes))


@total_ordering
@dataclass(frozen=True)
class GroupElement:
    """A coordinate vector; comparison is lexicographic, addition coordinatewise."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def _check(self, other: "GroupElement") -> None:
        if len(self.coords) != len(other.coords):
            raise ValueError(f"arity mismatch: {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple(-a for a in self.coords))

    def __mul__(self, k) -> "GroupElement":
        return GroupElement(tuple(a * k for a in self.coords))

    __rmul__ = __mul__

    def __lt__(self, other) -> bool:
        if isinstance(other, _Infinity):
            return True
        self._check(other)
        return self.coords < other.coords

    def __len__(self) -> int:
        return len(self.coords)

    def leading_index(self) -> Optional[int]:
        """0-based position of the most significant nonzero coordinate."""
        for i, c in enumerate(self.coords):
            if c != 0:
                return i
        return None

    def sign(self) -> int:
        i = self.leading_index()
        if i is None:
            return 0
        return 1 if self.coords[i] > 0 else -1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self) -> str:
        body = ", ".join(str(c) for c in self.coords)
        return f"({body})" if len(self.coords) != 1 else body

    def __repr__(self) -> str:
        return f"GroupElement({self})"


class _Infinity:
    """Value of the zero element: larger than every group element."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__


INFINITY = _Infinity()


@dataclass(frozen=True)
class ConvexCut:
    """Cut ``index`` denotes the convex subgroup of summands ``index+1..n``."""

    index: int


@dataclass(frozen=True)
class OAGDesc:
    summands: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        for s in self.summands:
            if not isinstance(s, ArchSummand):
                raise TypeError(f"not an archimedean summand: {s!r}")

    @property
    def rank(self) -> int:
        return len(self.summands)

    @property
    def is_trivial(self) -> bool:
        return not self.summands

    def contains(self, x: GroupElement) -> bool:
        if len(x.coords) != self.rank:
            return False
        return all(a.contains(c) for a, c in zip(self.summands, x.coords))

    def element(self, *coords: Rational) -> GroupElement:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        x = GroupElement(tuple(Fraction(c) for c in coords))
        if len(x.coords) != self.rank:
            raise ValueError(f"arity mismatch: element has {len(x.coords)} coordinates, group has rank {self.rank}")
        for i, (a, c) in enumerate(zip(self.summands, x.coords)):
            if not a.contains(c):
                raise MembershipError(f"coordinate {c} is not in summand {i + 1} ({a})")
        return x

    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.rank)

    def unit(self, i: int) -> GroupElement:
        """Element with 1 at 0-based position ``i`` and zeros elsewhere."""
        return GroupElement(tuple(1 if j == i else 0 for j in range(self.rank)))

    def cut(self, index: int) -> ConvexCut:
        if not 0 <= index <= self.rank:
            raise ValueError(f"cut {index} out of range 0..{self.rank}")
        return ConvexCut(index)

    def __str__(self) -> str:
        if self.rank == 1:
            return str(self.summands[0])
        return "lex(" + ",".join(str(s) for s in self.summands) + ")"


Z = OAGDesc((DISCRETE,))
Q = OAGDesc((RATIONALS,))
TRIVIAL = OAGDesc(())


def Zp(p: int) -> OAGDesc:
    """The group Z[1/p]."""
    return OAGDesc((dense_summand([p]),))


def dense(*primes: int) -> OAGDesc:
    return OAGDesc((dense_summand(primes),))


def lex(*groups: OAGDesc) -> OAGDesc:
    out: list = []
    for g in groups:
        out.extend(g.summands)
    return OAGDesc(tuple(out))


def embed(x: GroupElement, before: int, after: int) -> GroupElement:
    """Pad ``x`` with zero coordinates on either side."""
    return GroupElement((0,) * before + x.coords + (0,) * after)


class ElementOps(NamedTuple):
    sum: GroupElement
    cmp: int
    member: bool


def element_ops(G: OAGDesc, x: GroupElement, y: GroupElement) -> ElementOps:
    if len(x) != G.rank or len(y) != G.rank:
        raise ValueError("arity mismatch with the group")
    cmp = (x > y) - (x < y)
    s = x + y
    return ElementOps(s, cmp, G.contains(x) and G.contains(y) and G.contains(s))


def is_p_divisible(G: OAGDesc, p: int) -> bool:
    _prime(p)
    return all(a.divisible_by(p) for a in G.summands)


def has_min_positive(G: OAGDesc) -> bool:
    if G.is_trivial:
        raise PreconditionError("the trivial group has no positive elements")
    return G.summands[-1].is_discrete


class GammaCuts(NamedTuple):
    minus: ConvexCut
    plus: ConvexCut


def gamma_cuts(G: OAGDesc, gamma: GroupElement) -> GammaCuts:
    """Largest convex subgroup omitting ``gamma`` and smallest one containing it."""
    if len(gamma) != G.rank:
        raise ValueError("arity mismatch with the group")
    i = gamma.leading_index()
    if i is None:
        raise PreconditionError("gamma must be nonzero")
    return GammaCuts(ConvexCut(i + 1), ConvexCut(i))


def is_quotient_discrete(G: OAGDesc, outer: ConvexCut, inner: ConvexCut) -> bool:
    if not (0 <= outer.index <= inner.index <= G.rank):
        raise PreconditionError("inner cut must lie inside outer cut")
    if outer.index == inner.index:
        raise PreconditionError("the quotient of equal cuts is trivial")
    return G.summands[inner.index - 1].is_discrete


def max_p_divisible_convex(G: OAGDesc, p: int) -> ConvexCut:
    _prime(p)
    idx = G.rank
    while idx > 0 and G.summands[idx - 1].divisible_by(p):
        idx -= 1
    return ConvexCut(idx)


def _positive(G: OAGDesc, gamma: GroupElement) -> None:
    if len(gamma) != G.rank:
        raise ValueError("arity mismatch with the group")
    if gamma.sign() <= 0:
        raise PreconditionError("gamma must be positive")


def rough_p_divisible(G: OAGDesc, gamma: GroupElement, p: int) -> bool:
    """Whether every element of ``[-gamma, gamma]`` lies in ``pG``.

    For lexicographic products of rank-1 summands this is equivalent to the
    smallest convex subgroup containing ``gamma`` being p-divisible.
    """
    _positive(G, gamma)
    _prime(p)
    plus = gamma_cuts(G, gamma).plus
    return all(a.divisible_by(p) for a in G.summands[plus.index:])


def interval_finite(G: OAGDesc, gamma: GroupElement) -> bool:
    if len(gamma) != G.rank:
        raise ValueError("arity mismatch with the group")
    if gamma.sign() < 0:
        raise PreconditionError("gamma must be non-negative")
    i = gamma.leading_index()
    if i is None:
        return True
    return i == G.rank - 1 and G.summands[i].is_discrete


def min_positive_image(G: OAGDesc, gamma: GroupElement) -> bool:
    """Whether the image of ``gamma`` is minimum positive modulo the largest convex subgroup omitting it."""
    _positive(G, gamma)
    i = gamma.leading_index()
    return G.summands[i].is_discrete and gamma.coords[i] == 1


@dataclass(frozen=True)
class Rank1Desc:
    """The subgroup ``{r in Q : v_q(r) >= floor(q) for all q}`` of the rationals.

    ``prime_floors`` lists the primes whose floor differs from ``default_floor``.
    """

    default_floor: float = 0
    prime_floors: tuple = ()

    @classmethod
    def make(cls, default_floor, floors: dict) -> "Rank1Desc":
        kept = tuple(sorted((q, f) for q, f in floors.items() if f != default_floor))
        return cls(default_floor, kept)

    def floor(self, q: int) -> float:
        return dict(self.prime_floors).get(q, self.default_floor)

    def contains(self, r: Rational) -> bool:
        r = Fraction(r)
        if r == 0:
            return True
        primes = _primes_of(r) | {q for q, _ in self.prime_floors}
        return all(qval(q, r) >= self.floor(q) for q in primes)

    def is_divisible_by(self, q: int) -> bool:
        return self.floor(q) == NEG_INF

    def __str__(self) -> str:
        def f(x):
            return "-inf" if x == NEG_INF else str(int(x))

        parts = [f"default={f(self.default_floor)}"]
        parts += [f"{q}={f(v)}" for q, v in self.prime_floors]
        return "{" + ", ".join(parts) + "}"


def rel_div_hull(G: OAGDesc, gamma: GroupElement) -> Rank1Desc:
    """Relative divisible hull of the subgroup generated by ``gamma``, normalized so gamma is 1."""
    if len(gamma) != G.rank:
        raise ValueError("arity mismatch with the group")
    if gamma.is_zero():
        raise PreconditionError("gamma must be nonzero")
    support = [(a, c) for a, c in zip(G.summands, gamma.coords) if c != 0]
    generic = any(a.is_discrete or a.primes is not None for a, _ in support)
    default = 0 if generic else NEG_INF
    candidates: set[int] = set()
    for a, c in support:
        candidates |= _primes_of(c)
        if a.primes is not None:
            candidates |= set(a.primes)
    floors = {}
    for q in candidates:
        constraints = [-qval(q, c) for a, c in support if not a.divisible_by(q)]
        floors[q] = max(constraints) if constraints else NEG_INF
    return Rank1Desc.make(default, floors)


class Split(NamedTuple):
    quotient: OAGDesc
    subgroup: OAGDesc


def quotient_and_subgroup(G: OAGDesc, cut: ConvexCut) -> Split:
    if not 0 <= cut.index <= G.rank:
        raise ValueError(f"cut {cut.index} out of range 0..{G.rank}")
    return Split(OAGDesc(G.summands[: cut.index]), OAGDesc(G.summands[cut.index:]))
