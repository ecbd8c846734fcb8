"""Valued-field towers, coarsening, composition and structural flags.

Every descriptor is a stack ``core((G))`` where ``G`` is the (possibly trivial)
Hahn layer and the core is one of a handful of known constructions.  A Cohen
core may itself carry an equal-characteristic-p valued field as its residue
part, so towers nest.  Value groups and convex cuts are read off the summand
list: the layer summands first, then the core's summands.

Coarsening a tower returns a *coarse* part with a hole at the bottom (a
trivial core, or a Cohen core over a bare field) and a *residue* part;
:func:`compose` plugs the residue back into the hole.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Union

from . import fields as F
from .errors import DescriptorError, PreconditionError, UnsupportedCut
from .fields import AbstractField, AlgClosed, FieldDesc, Finite, SepClosed
from .logic import Tri, and3
from .oag import (
    TRIVIAL,
    Z,
    ConvexCut,
    GroupElement,
    OAGDesc,
    _prime,
    embed,
    gamma_cuts,
    interval_finite,
    is_p_divisible,
    is_quotient_discrete,
    lex,
)

_FLAG_NAMES = ("henselian", "defectless", "sep_defectless", "alg_maximal", "sep_alg_maximal")


@dataclass(frozen=True)
class CoreFlags:
    henselian: Tri = None
    defectless: Tri = None
    sep_defectless: Tri = None
    alg_maximal: Tri = None
    sep_alg_maximal: Tri = None

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in _FLAG_NAMES}

    def closed(self, char_zero: bool = False, residue_char_zero: bool = False) -> "CoreFlags":
        """Apply the standard implications between the flags until nothing changes.

        ``char_zero``: the field has characteristic 0, so every extension is
        separable and the separable variants coincide with the plain ones.
        ``residue_char_zero``: no valued field of residue characteristic 0 has defect.
        """
        f = self.as_dict()

        def put(key: str, value: bool, why: str) -> bool:
            if f[key] is None:
                f[key] = value
                return True
            if f[key] != value:
                raise DescriptorError(f"inconsistent flags: {key} must be {str(value).lower()} ({why})")
            return False

        if residue_char_zero:
            put("defectless", True, "residue characteristic 0")
        changed = True
        while changed:
            changed = False
            h, d, sd, am, sam = (f[k] for k in _FLAG_NAMES)
            rules = []
            if d is True:
                rules.append(("sep_defectless", True, "defectless implies separably defectless"))
            if sd is False:
                rules.append(("defectless", False, "defectless implies separably defectless"))
            if h is True and d is True:
                rules.append(("alg_maximal", True, "henselian defectless fields are algebraically maximal"))
            if h is True and am is False:
                rules.append(("defectless", False, "henselian defectless fields are algebraically maximal"))
            if h is True and sd is True:
                rules.append(("sep_alg_maximal", True, "henselian separably defectless fields are separably algebraically maximal"))
            if h is True and sam is False:
                rules.append(("sep_defectless", False, "henselian separably defectless fields are separably algebraically maximal"))
            if am is True:
                rules.append(("sep_alg_maximal", True, "algebraically maximal implies separably algebraically maximal"))
            if sam is False:
                rules.append(("alg_maximal", False, "algebraically maximal implies separably algebraically maximal"))
            if am is True or sam is True:
                rules.append(("henselian", True, "separably algebraically maximal fields are henselian"))
            if h is False:
                rules.append(("sep_alg_maximal", False, "separably algebraically maximal fields are henselian"))
            if char_zero:
                for plain, sep in (("defectless", "sep_defectless"), ("alg_maximal", "sep_alg_maximal")):
                    if f[plain] is not None:
                        rules.append((sep, f[plain], "characteristic 0"))
                    if f[sep] is not None:
                        rules.append((plain, f[sep], "characteristic 0"))
            for key, value, why in rules:
                changed |= put(key, value, why)
        return CoreFlags(**f)


ALL_TRUE = CoreFlags(True, True, True, True, True)


# ---------------------------------------------------------------- cores


@dataclass(frozen=True)
class TrivialCore:
    """The trivially valued field ``k``."""

    k: FieldDesc

    def __post_init__(self):
        object.__setattr__(self, "k", F.validate(self.k))


@dataclass(frozen=True)
class QpExt:
    """A finite extension of Q_p with ramification ``e`` and residue degree ``f``."""

    p: int
    e: int = 1
    f: int = 1

    def __post_init__(self):
        try:
            _prime(self.p)
        except ValueError as exc:
            raise DescriptorError(str(exc)) from None
        if self.e < 1 or self.f < 1:
            raise DescriptorError("ramification and residue degree must be >= 1")


@dataclass(frozen=True)
class Cohen:
    """The Cohen field over ``lower``: value group Z, v(p) = 1.

    ``lower`` is an equal-characteristic-p tower; when it is trivially valued the
    core is just the complete unramified field with that residue field.
    """

    lower: "ValuedFieldDesc"

    def __post_init__(self):
        low = self.lower
        if isinstance(low, FieldDesc):
            low = ValuedFieldDesc(TRIVIAL, TrivialCore(low))
            object.__setattr__(self, "lower", low)
        if not isinstance(low, ValuedFieldDesc):
            raise DescriptorError("a Cohen core needs a field or a valued field")
        c, rc = low.char_pair
        if c == 0 or c != rc:
            raise DescriptorError("the residue part of a Cohen core must have equal characteristic p > 0")


@dataclass(frozen=True)
class TameKaplansky:
    """Mixed characteristic Kaplansky field with residue ``k``, value group ``G`` and v(p) = ``gamma_p``."""

    k: FieldDesc
    G: OAGDesc
    gamma_p: GroupElement

    def __post_init__(self):
        k = F.validate(self.k)
        object.__setattr__(self, "k", k)
        p = k.char
        if p == 0:
            raise DescriptorError("a mixed characteristic core needs a residue field of positive characteristic")
        _check_gamma(self.G, self.gamma_p)
        if not is_p_divisible(self.G, p):
            raise DescriptorError(f"not Kaplansky: value group {self.G} is not {p}-divisible")
        if k.is_perfect is not True:
            raise DescriptorError(f"not Kaplansky: residue field {k} is not known to be perfect")
        if k.no_sep_ext_div_p is not True:
            raise DescriptorError(
                f"not Kaplansky: residue field {k} is not known to lack separable extensions of degree divisible by {p}"
            )


@dataclass(frozen=True)
class ScvfCore:
    """A separably closed valued field of characteristic p and imperfection degree e.

    The value group must be divisible and nontrivial; the residue field is
    algebraically closed.
    """

    p: int
    e: F.Degree
    G: OAGDesc

    def __post_init__(self):
        SepClosed(self.p, self.e)
        if self.G.is_trivial:
            raise DescriptorError("use triv(SCF(p,e)) for a trivially valued separably closed field")
        if any(s.primes is not None for s in self.G.summands):
            raise DescriptorError(f"the value group of a separably closed valued field is divisible, got {self.G}")


@dataclass(frozen=True)
class AbstractCore:
    """A valued field known only through flags.

    ``gamma_p`` is the value of p in mixed characteristic and ``None`` in equal
    characteristic.  ``imperfection`` is the imperfection degree of the field
    itself (equal characteristic p only).
    """

    k: FieldDesc
    G: OAGDesc
    gamma_p: Optional[GroupElement] = None
    flags: CoreFlags = CoreFlags()
    imperfection: Optional[F.Degree] = None

    def __post_init__(self):
        k = F.validate(self.k)
        object.__setattr__(self, "k", k)
        if self.G.is_trivial:
            raise DescriptorError("an abstract core needs a nontrivial value group; use triv(k)")
        mixed = self.gamma_p is not None
        if mixed:
            if k.char == 0:
                raise DescriptorError("mixed characteristic needs a residue field of positive characteristic")
            _check_gamma(self.G, self.gamma_p)
        if mixed or k.char == 0:
            if self.imperfection not in (None, 0):
                raise DescriptorError("characteristic 0 fields have imperfection degree 0")
            object.__setattr__(self, "imperfection", 0)
        elif self.imperfection is not None:
            F._check_degree(self.imperfection)
        char_zero = mixed or k.char == 0
        object.__setattr__(self, "flags", self.flags.closed(char_zero=char_zero, residue_char_zero=k.char == 0))


Core = Union[TrivialCore, QpExt, Cohen, TameKaplansky, ScvfCore, AbstractCore]


def _check_gamma(G: OAGDesc, gamma: GroupElement) -> None:
    if G.is_trivial:
        raise DescriptorError("mixed characteristic needs a nontrivial value group")
    if not G.contains(gamma):
        raise DescriptorError(f"v(p) = {gamma} is not an element of {G}")
    if gamma.sign() <= 0:
        raise DescriptorError(f"v(p) = {gamma} must be positive")


# ---------------------------------------------------------------- towers


@dataclass(frozen=True)
class ValuedFieldDesc:
    """``core((layer))`` with the composed valuation; ``layer`` may be trivial."""

    layer: OAGDesc
    core: Core

    def __post_init__(self):
        if not isinstance(self.layer, OAGDesc):
            raise TypeError("layer must be an OAGDesc")

    # -- structure
    @property
    def upper_layers(self) -> tuple:
        return () if self.layer.is_trivial else (self.layer,)

    @property
    def core_group(self) -> OAGDesc:
        c = self.core
        if isinstance(c, TrivialCore):
            return TRIVIAL
        if isinstance(c, QpExt):
            return Z
        if isinstance(c, Cohen):
            return lex(Z, c.lower.value_group)
        return c.G

    @property
    def value_group(self) -> OAGDesc:
        return lex(self.layer, self.core_group)

    @property
    def is_trivial(self) -> bool:
        return self.value_group.is_trivial

    @property
    def char_pair(self) -> tuple:
        c = self.core
        if isinstance(c, TrivialCore):
            return (c.k.char, c.k.char)
        if isinstance(c, (QpExt, Cohen)):
            p = c.p if isinstance(c, QpExt) else c.lower.char_pair[1]
            return (0, p)
        if isinstance(c, TameKaplansky):
            return (0, c.k.char)
        if isinstance(c, ScvfCore):
            return (c.p, c.p)
        return (0 if c.gamma_p is not None else c.k.char, c.k.char)

    @property
    def is_mixed(self) -> bool:
        c, rc = self.char_pair
        return c == 0 and rc > 0

    @property
    def residue_field(self) -> FieldDesc:
        c = self.core
        if isinstance(c, (TrivialCore, TameKaplansky, AbstractCore)):
            return c.k
        if isinstance(c, QpExt):
            return Finite(c.p, c.f)
        if isinstance(c, Cohen):
            return c.lower.residue_field
        return AlgClosed(c.p)

    @property
    def value_of_p(self) -> Optional[GroupElement]:
        """v(p) in mixed characteristic, ``None`` otherwise."""
        c = self.core
        if not self.is_mixed:
            return None
        if isinstance(c, QpExt):
            core_vp = GroupElement((c.e,))
        elif isinstance(c, Cohen):
            core_vp = embed(GroupElement((1,)), 0, c.lower.value_group.rank)
        else:
            core_vp = c.gamma_p
        return embed(core_vp, self.layer.rank, 0)

    def __str__(self) -> str:
        from .dsl import format_valued_field

        return format_valued_field(self)


def build(upper_layers, core: Core) -> ValuedFieldDesc:
    """Stack Hahn layers (outermost first) over a core; consecutive layers merge into one."""
    layers = list(upper_layers)
    for g in layers:
        if g.is_trivial:
            raise DescriptorError("a Hahn layer needs a nontrivial group")
    return ValuedFieldDesc(lex(*layers), core)


def triv(k: FieldDesc) -> ValuedFieldDesc:
    return ValuedFieldDesc(TRIVIAL, TrivialCore(k))


def hahn(K: ValuedFieldDesc, G: OAGDesc) -> ValuedFieldDesc:
    """``K((G))`` with the composed valuation."""
    if G.is_trivial:
        raise DescriptorError("a Hahn layer needs a nontrivial group")
    return ValuedFieldDesc(lex(G, K.layer), K.core)


def field_of(K: ValuedFieldDesc) -> FieldDesc:
    """The underlying field, as far as the descriptor determines it."""
    c = K.core
    if K.is_trivial:
        return c.k
    if isinstance(c, ScvfCore) and K.layer.is_trivial:
        return F.validate(SepClosed(c.p, c.e))
    char = K.char_pair[0]
    if char == 0:
        return AbstractField(0, True, 0, None, None, False)
    base = {TrivialCore: lambda: c.k.imperfection_degree, ScvfCore: lambda: c.e,
            AbstractCore: lambda: c.imperfection}[type(c)]()
    extra = sum(1 for s in K.value_group.summands if not s.divisible_by(char))
    imp = None if base is None else base + extra
    return F.validate(AbstractField(char, None if imp is None else imp == 0, imp, None, None, False))


# ---------------------------------------------------------------- flags


def _pieces(K: ValuedFieldDesc) -> list:
    """Flags of the rank-wise pieces the valuation is composed of, outermost first."""
    out = []
    if not K.layer.is_trivial:
        out.append(ALL_TRUE)
    c = K.core
    if isinstance(c, TrivialCore):
        pass
    elif isinstance(c, (QpExt, TameKaplansky)):
        out.append(ALL_TRUE)
    elif isinstance(c, Cohen):
        out.append(ALL_TRUE)
        out.extend(_pieces(c.lower))
    elif isinstance(c, ScvfCore):
        out.append(_scvf_flags(c))
    else:
        out.append(c.flags)
    return out


def piece_flags(K: ValuedFieldDesc) -> list:
    """Public view of the per-piece flags, outermost first."""
    return list(_pieces(K))


def _scvf_flags(c: ScvfCore) -> CoreFlags:
    perfect = c.e == 0
    return CoreFlags(True, perfect, True, perfect, True)


def structural_flags(K: ValuedFieldDesc) -> CoreFlags:
    """Flags of the composed valuation from the flags of its pieces.

    Henselianity and defectlessness are conjunctions over the pieces.  A piece
    with defect below a nontrivial outer piece spoils separable defectlessness
    of the whole, which is what makes a Cohen field over an imperfect
    separably closed valued field fail it even though both pieces satisfy it.
    A piece without (separable) algebraic maximality spoils it for the whole,
    since immediate extensions of a piece lift to immediate extensions of the
    composition.
    """
    pieces = _pieces(K)
    if not pieces:
        return ALL_TRUE
    char_zero = K.char_pair[0] == 0
    hens = and3(*(p.henselian for p in pieces))
    defl = and3(*(p.defectless for p in pieces))
    single = len(pieces) == 1

    if defl is True:
        sep = True
    elif char_zero:
        sep = defl
    elif any(p.sep_defectless is False for p in pieces):
        sep = False
    elif any(p.defectless is False for p in pieces[1:]):
        # an inseparable defect extension of a residue piece lifts to a separable one
        sep = False
    else:
        sep = pieces[0].sep_defectless if single else None

    if any(p.alg_maximal is False for p in pieces):
        am = False
    else:
        am = pieces[0].alg_maximal if single else None
    if any(p.sep_alg_maximal is False for p in pieces):
        sam = False
    else:
        sam = pieces[0].sep_alg_maximal if single else None

    flags = CoreFlags(hens, defl, sep, am, sam)
    return flags.closed(char_zero=char_zero, residue_char_zero=K.char_pair[1] == 0)


def separable_defect_pattern(K: ValuedFieldDesc) -> bool:
    """All pieces separably defectless, yet some piece below the outermost has defect.

    The defect extension of the lower piece lifts through the nontrivial outer
    valuation to a separable defect extension of the whole.  In characteristic
    0 the outermost piece cannot have defect without separable defect, so this
    covers every failure of the composed separable flag there.
    """
    pieces = _pieces(K)
    return all(p.sep_defectless is True for p in pieces) and any(p.defectless is False for p in pieces[1:])


def is_kaplansky(K: ValuedFieldDesc) -> Tri:
    p = K.char_pair[1]
    if p == 0:
        return True
    return and3(is_p_divisible(K.value_group, p), F.kaplansky_residue(K.residue_field))


def is_finitely_ramified(K: ValuedFieldDesc) -> Optional[bool]:
    if not K.is_mixed:
        return None
    return interval_finite(K.value_group, K.value_of_p)


def is_unramified(K: ValuedFieldDesc) -> Optional[bool]:
    """Whether v(p) is the minimum positive element of the value group."""
    if not K.is_mixed:
        return None
    G, vp = K.value_group, K.value_of_p
    i = vp.leading_index()
    return i == G.rank - 1 and G.summands[i].is_discrete and vp.coords[i] == 1


def predicates(K: ValuedFieldDesc) -> dict:
    return {
        "is_trivial": K.is_trivial,
        "is_finitely_ramified": is_finitely_ramified(K),
        "is_unramified": is_unramified(K),
        "is_kaplansky": is_kaplansky(K),
        "char_pair": K.char_pair,
    }


def claim_properties(K: ValuedFieldDesc) -> dict:
    """The eight properties shared by a valued field and its henselization."""
    c, rc = K.char_pair
    flags = structural_flags(K)
    return {
        "trivial": K.is_trivial,
        "equal_char_zero": c == 0 and rc == 0,
        "equal_char_p": rc if c == rc and c > 0 else None,
        "mixed_char_p": rc if K.is_mixed else None,
        "sep_defectless": flags.sep_defectless,
        "defectless": flags.defectless,
        "kaplansky": is_kaplansky(K),
        "finitely_ramified": is_finitely_ramified(K),
    }


# ---------------------------------------------------------------- henselization


def _henselize_core(c: Core) -> Core:
    if isinstance(c, Cohen):
        return Cohen(henselize(c.lower))
    if isinstance(c, AbstractCore):
        f = c.flags
        flags = CoreFlags(True, f.defectless, f.sep_defectless, None, None)
        return replace(c, flags=flags)
    return c


def henselize(K: ValuedFieldDesc) -> ValuedFieldDesc:
    """The henselization: an immediate extension, so only the henselian flag moves."""
    return ValuedFieldDesc(K.layer, _henselize_core(K.core))


# ---------------------------------------------------------------- coarsening


class Coarsening(NamedTuple):
    coarse: ValuedFieldDesc
    residue: ValuedFieldDesc


def coarsen_at(K: ValuedFieldDesc, cut: Union[ConvexCut, int]) -> Coarsening:
    """Split ``K`` at the convex subgroup ``cut`` into the coarsening and its residue valued field."""
    c = cut.index if isinstance(cut, ConvexCut) else cut
    n = K.value_group.rank
    if not 0 <= c <= n:
        raise UnsupportedCut(f"cut {c} out of range 0..{n}")
    if c == 0:
        return Coarsening(triv(field_of(K)), K)
    if c == n:
        return Coarsening(K, triv(K.residue_field))
    L = K.layer.rank
    if c <= L:
        rest = ValuedFieldDesc(OAGDesc(K.layer.summands[c:]), K.core)
        hole = TrivialCore(field_of(rest))
        return Coarsening(ValuedFieldDesc(OAGDesc(K.layer.summands[:c]), hole), rest)
    j = c - L
    core = K.core
    if isinstance(core, Cohen):
        if j == 1:
            hole = Cohen(field_of(core.lower))
            return Coarsening(ValuedFieldDesc(K.layer, hole), core.lower)
        inner = coarsen_at(core.lower, j - 1)
        return Coarsening(ValuedFieldDesc(K.layer, Cohen(inner.coarse)), inner.residue)
    raise UnsupportedCut(f"cut {c} lies inside a {type(core).__name__} core, which has no descriptor-level factorization")


def compose(coarse: ValuedFieldDesc, residue: ValuedFieldDesc) -> ValuedFieldDesc:
    """Fill the hole at the bottom of ``coarse`` with ``residue``."""
    if residue.is_trivial:
        return coarse
    if coarse.is_trivial:
        return residue
    core = coarse.core
    if isinstance(core, TrivialCore):
        if core.k.char != residue.char_pair[0]:
            raise DescriptorError("characteristic mismatch between residue field and residue valued field")
        return ValuedFieldDesc(lex(coarse.layer, residue.layer), residue.core)
    if isinstance(core, Cohen):
        return ValuedFieldDesc(coarse.layer, Cohen(compose(core.lower, residue)))
    raise DescriptorError(f"a {type(core).__name__} core has nontrivial residue valuation data; nothing to compose into")


# ---------------------------------------------------------------- standard decomposition


@dataclass(frozen=True)
class Decomposition:
    delta_p: ConvexCut
    delta_0: ConvexCut
    upper: ValuedFieldDesc  # (K, v_0)
    K_v0: ValuedFieldDesc  # (Kv_0, v-bar)
    Kv0_vbar_p: Optional[ValuedFieldDesc]  # (Kv_0, v-bar_p)
    Kvp_vbar: Optional[ValuedFieldDesc]  # (Kv_p, v-bar)
    K_vp: Optional[ValuedFieldDesc]  # (K, v_p)
    quotient_discrete: bool
    notes: tuple = field(default=())


def _try(fn, *args):
    try:
        return fn(*args)
    except UnsupportedCut:
        return None


def standard_decomposition(K: ValuedFieldDesc) -> Decomposition:
    if not K.is_mixed:
        raise PreconditionError("the standard decomposition needs mixed characteristic (0,p)")
    G, vp = K.value_group, K.value_of_p
    cuts = gamma_cuts(G, vp)
    notes = []
    at0 = _try(coarsen_at, K, cuts.plus)
    if at0 is None:
        # Delta_0 strictly inside an opaque core: nothing finer than K itself.
        notes.append(f"cut {cuts.plus.index} (Delta_0) is interior to the core")
        upper, K_v0 = None, None
    else:
        upper, K_v0 = at0
    atp = _try(coarsen_at, K, cuts.minus)
    if atp is None:
        notes.append(f"cut {cuts.minus.index} (Delta_p) is interior to the core")
        K_vp, Kvp_vbar = None, None
    else:
        K_vp, Kvp_vbar = atp
    Kv0_vbar_p = None
    if K_v0 is not None:
        inner = _try(coarsen_at, K_v0, cuts.minus.index - cuts.plus.index)
        Kv0_vbar_p = None if inner is None else inner.coarse
    return Decomposition(
        delta_p=cuts.minus,
        delta_0=cuts.plus,
        upper=upper,
        K_v0=K_v0,
        Kv0_vbar_p=Kv0_vbar_p,
        Kvp_vbar=Kvp_vbar,
        K_vp=K_vp,
        quotient_discrete=is_quotient_discrete(G, cuts.plus, cuts.minus),
        notes=tuple(notes),
    )


def recompose(d: Decomposition) -> ValuedFieldDesc:
    if None in (d.upper, d.Kv0_vbar_p, d.Kvp_vbar):
        raise UnsupportedCut("decomposition has pieces interior to a core")
    return compose(d.upper, compose(d.Kv0_vbar_p, d.Kvp_vbar))
