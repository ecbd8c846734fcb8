"""Residue and coefficient field descriptors.

Only the algebraic flags the classification consumes are carried: characteristic,
perfection, imperfection degree, whether the field has no proper separable
extension of degree divisible by its characteristic, NIP, and finiteness.
Flags are three-valued (``None`` is unknown).  NIP is an input, never computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

from sympy import isprime

from .errors import DescriptorError
from .logic import Tri, and3

INF = math.inf
Degree = Union[int, float]  # natural number or INF


def _check_char(c: int, allow_zero: bool = True) -> None:
    if c == 0 and allow_zero:
        return
    if not isinstance(c, int) or not isprime(c):
        raise DescriptorError(f"characteristic must be 0 or a prime, got {c!r}")


def _check_degree(e) -> None:
    if e is None or e == INF:
        return
    if not isinstance(e, int) or e < 0:
        raise DescriptorError(f"imperfection degree must be a natural number or inf, got {e!r}")


def _degree_str(e) -> str:
    return "inf" if e == INF else str(e)


class FieldDesc:
    """Common predicate surface of every field variant."""

    char: int

    @property
    def is_perfect(self) -> Tri:
        raise NotImplementedError

    @property
    def imperfection_degree(self) -> Optional[Degree]:
        raise NotImplementedError

    @property
    def no_sep_ext_div_p(self) -> Tri:
        raise NotImplementedError

    @property
    def is_nip(self) -> Tri:
        raise NotImplementedError

    @property
    def is_finite(self) -> Tri:
        raise NotImplementedError

    @property
    def is_infinite(self) -> Tri:
        f = self.is_finite
        return None if f is None else not f


@dataclass(frozen=True)
class Finite(FieldDesc):
    """The field with p**n elements."""

    p: int
    n: int = 1

    def __post_init__(self):
        _check_char(self.p, allow_zero=False)
        if not isinstance(self.n, int) or self.n < 1:
            raise DescriptorError("finite field degree must be >= 1")

    char = property(lambda self: self.p)
    is_perfect = property(lambda self: True)
    imperfection_degree = property(lambda self: 0)
    # F_q has a cyclic extension of every degree, in particular of degree p.
    no_sep_ext_div_p = property(lambda self: False)
    is_nip = property(lambda self: True)
    is_finite = property(lambda self: True)

    @property
    def order(self) -> int:
        return self.p ** self.n

    def __str__(self) -> str:
        return f"F({self.order})"


@dataclass(frozen=True)
class AlgClosed(FieldDesc):
    characteristic: int

    def __post_init__(self):
        _check_char(self.characteristic)

    char = property(lambda self: self.characteristic)
    is_perfect = property(lambda self: True)
    imperfection_degree = property(lambda self: 0)
    no_sep_ext_div_p = property(lambda self: True)
    is_nip = property(lambda self: True)
    is_finite = property(lambda self: False)

    def __str__(self) -> str:
        return "ACF0" if self.characteristic == 0 else f"Falg({self.characteristic})"


@dataclass(frozen=True)
class RealClosed(FieldDesc):
    char = property(lambda self: 0)
    is_perfect = property(lambda self: True)
    imperfection_degree = property(lambda self: 0)
    # residue characteristic 0: the Kaplansky conditions are vacuous
    no_sep_ext_div_p = property(lambda self: True)
    is_nip = property(lambda self: True)
    is_finite = property(lambda self: False)

    def __str__(self) -> str:
        return "RCF"


@dataclass(frozen=True)
class SepClosed(FieldDesc):
    """Separably closed field of characteristic p and imperfection degree e."""

    p: int
    e: Degree = 1

    def __post_init__(self):
        _check_char(self.p, allow_zero=False)
        _check_degree(self.e)
        if self.e is None:
            raise DescriptorError("separably closed fields need a definite imperfection degree")

    char = property(lambda self: self.p)
    is_perfect = property(lambda self: self.e == 0)
    imperfection_degree = property(lambda self: self.e)
    no_sep_ext_div_p = property(lambda self: True)
    is_nip = property(lambda self: True)
    is_finite = property(lambda self: False)

    def __str__(self) -> str:
        return f"SCF({self.p},{_degree_str(self.e)})"


@dataclass(frozen=True)
class AbstractField(FieldDesc):
    """A field known only through its flags."""

    characteristic: int
    perfect: Tri = None
    imperfection: Optional[Degree] = None
    no_sep_ext: Tri = None
    nip: Tri = None
    finite: Tri = None

    def __post_init__(self):
        _check_char(self.characteristic)
        _check_degree(self.imperfection)

    char = property(lambda self: self.characteristic)
    is_perfect = property(lambda self: self.perfect)
    imperfection_degree = property(lambda self: self.imperfection)
    no_sep_ext_div_p = property(lambda self: self.no_sep_ext)
    is_nip = property(lambda self: self.nip)
    is_finite = property(lambda self: self.finite)

    def __str__(self) -> str:
        parts = [f"char={self.characteristic}"]
        for key, val in (("perfect", self.perfect), ("imp", self.imperfection), ("noPext", self.no_sep_ext),
                         ("nip", self.nip), ("finite", self.finite)):
            if val is None:
                continue
            parts.append(f"{key}={_degree_str(val) if key == 'imp' else str(val).lower()}")
        return "field{" + ",".join(parts) + "}"


ACF0 = AlgClosed(0)
RCF = RealClosed()


def field_predicates(k: FieldDesc) -> dict:
    return {
        "char": k.char,
        "is_perfect": k.is_perfect,
        "imperfection_degree": k.imperfection_degree,
        "no_sep_ext_div_p": k.no_sep_ext_div_p,
        "is_nip": k.is_nip,
        "is_finite": k.is_finite,
        "is_infinite": k.is_infinite,
    }


def validate(k: FieldDesc) -> FieldDesc:
    """Normalize a descriptor, rejecting inconsistent flag combinations.

    Besides perfection bookkeeping, one forcing rule is applied: an infinite NIP
    field of positive characteristic has no Galois extension of degree divisible
    by p, hence no separable extension of such degree.
    """
    if isinstance(k, SepClosed):
        return AlgClosed(k.p) if k.e == 0 else k
    if not isinstance(k, AbstractField):
        return k

    c, perfect, imp = k.char, k.perfect, k.imperfection
    no_sep, nip, finite = k.no_sep_ext, k.nip, k.finite

    if c == 0:
        if perfect is False:
            raise DescriptorError("characteristic 0 fields are perfect")
        if imp not in (None, 0):
            raise DescriptorError("characteristic 0 fields have imperfection degree 0")
        if finite is True:
            raise DescriptorError("finite fields have positive characteristic")
        perfect, imp, finite = True, 0, False
    else:
        if perfect is True and imp not in (None, 0):
            raise DescriptorError("a perfect field has imperfection degree 0")
        if perfect is False and imp == 0:
            raise DescriptorError("an imperfect field has positive imperfection degree")
        if perfect is None and imp is not None:
            perfect = imp == 0
        if perfect is True:
            imp = 0
        if finite is True:
            if perfect is False:
                raise DescriptorError("finite fields are perfect")
            if no_sep is True:
                raise DescriptorError("finite fields have separable extensions of degree p")
            if nip is False:
                raise DescriptorError("finite fields are NIP")
            perfect, imp, no_sep, nip = True, 0, False, True
        if no_sep is True and finite is None:
            finite = False
        if nip is True and finite is False:
            if no_sep is False:
                raise DescriptorError(
                    "an infinite NIP field of positive characteristic has no Galois extension of degree divisible by p"
                )
            no_sep = True

    return replace(k, perfect=perfect, imperfection=imp, no_sep_ext=no_sep, nip=nip, finite=finite)


def same_field(a: FieldDesc, b: FieldDesc) -> bool:
    return validate(a) == validate(b)


def kaplansky_residue(k: FieldDesc) -> Tri:
    """Residue-side Kaplansky requirement: perfect and no separable extension of degree divisible by p."""
    if k.char == 0:
        return True
    return and3(k.is_perfect, k.no_sep_ext_div_p)
