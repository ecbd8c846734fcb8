"""Complete-theory tags for NIP henselian valued fields.

Notation used in tags::

    T(k,G)          theory of k((G)) with the power series valuation (equal char 0)
    Tsd_e(k,G)      henselian separably defectless, imperfection degree e (equal char p)
    T_e(k,G,g)      mixed characteristic, finitely ramified over a separably
                    algebraically maximal (Kv_p, v-bar) of imperfection degree e
    T(k,G,g)        mixed characteristic algebraically maximal
    T(k,G,g,F)      the same with algebraic part isomorphic to a compatible F
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .classifier import Verdict
from .errors import PreconditionError
from .fields import AlgClosed, FieldDesc, Finite, RealClosed
from .logic import Tri, and3
from .oag import (
    GroupElement,
    OAGDesc,
    Rank1Desc,
    gamma_cuts,
    is_p_divisible,
    min_positive_image,
    quotient_and_subgroup,
    rel_div_hull,
    rough_p_divisible,
)
from .valfield import ValuedFieldDesc, field_of, is_finitely_ramified, standard_decomposition, structural_flags


@dataclass(frozen=True)
class CompatibleCore:
    """An algebraic extension (F, v_F) of (Q, v_p) given by its value group hull, normalized v_F(p) = 1."""

    hull: Rank1Desc
    alg_maximal: bool = True
    algebraic_over_q: bool = True
    residue: Optional[FieldDesc] = None  # algebraic closure of F_p when None

    def __str__(self) -> str:
        return f"compat{self.hull}"


@dataclass(frozen=True)
class EqChar0:
    k: FieldDesc
    G: OAGDesc

    def notation(self) -> str:
        return f"T({self.k},{self.G})"


@dataclass(frozen=True)
class EqCharP_sd:
    e: object
    k: FieldDesc
    G: OAGDesc

    def notation(self) -> str:
        e = "?" if self.e is None else ("inf" if self.e == float("inf") else self.e)
        return f"Tsd_{e}({self.k},{self.G})"


@dataclass(frozen=True)
class Mixed_FinRam:
    e: object
    k: FieldDesc
    G: OAGDesc
    gamma: GroupElement

    def notation(self) -> str:
        e = "?" if self.e is None else ("inf" if self.e == float("inf") else self.e)
        return f"T_{e}({self.k},{self.G},{self.gamma})"


@dataclass(frozen=True)
class Mixed_AlgMax:
    k: FieldDesc
    G: OAGDesc
    gamma: GroupElement
    completion: Optional[CompatibleCore] = None

    def notation(self) -> str:
        tail = ",F" if self.completion is not None else ""
        return f"T({self.k},{self.G},{self.gamma}{tail})"


@dataclass(frozen=True)
class FiniteExtOf:
    inner: "TheoryTag"
    degree: Optional[int] = None

    def notation(self) -> str:
        deg = "unknown degree" if self.degree is None else f"degree {self.degree}"
        return f"finite extension ({deg}) of a model of {self.inner.notation()}"


TheoryTag = Union[EqChar0, EqCharP_sd, Mixed_FinRam, Mixed_AlgMax, FiniteExtOf]


def tag_kind(tag: TheoryTag) -> str:
    return type(tag).__name__


# ---------------------------------------------------------------- compatibility


def compatible_check(F: CompatibleCore, G: OAGDesc, gamma: GroupElement, p: int) -> bool:
    if gamma.sign() <= 0:
        raise PreconditionError("gamma must be positive")
    residue_ok = F.residue is None or F.residue == AlgClosed(p)
    return bool(F.alg_maximal and F.algebraic_over_q and residue_ok and F.hull == rel_div_hull(G, gamma))


# ---------------------------------------------------------------- theory assignment


def _require_nip(verdict: Verdict) -> None:
    if verdict.outcome != "NIP":
        raise PreconditionError(f"theory tags are assigned to NIP verdicts only, got {verdict.outcome}")


def _finite_ram_tag(K: ValuedFieldDesc) -> TheoryTag:
    G, vp = K.value_group, K.value_of_p
    i = vp.leading_index()
    ramification = int(vp.coords[i])
    unit = G.unit(i)
    Kv = K.residue_field
    p = K.char_pair[1]
    if Kv.is_finite is True:
        # finite residue: an extension of Q_p((...)) with residue F_p
        inner = Mixed_FinRam(0, Finite(p, 1), G, unit)
        f = Kv.n if isinstance(Kv, Finite) else None
    else:
        dec = standard_decomposition(K)
        e = None if dec.Kvp_vbar is None else field_of(dec.Kvp_vbar).imperfection_degree
        inner = Mixed_FinRam(e, Kv, G, unit)
        f = 1
    degree = None if f is None else ramification * f
    if degree == 1:
        return Mixed_FinRam(inner.e, inner.k, G, vp)
    return FiniteExtOf(inner, degree)


def theory_of(K: ValuedFieldDesc, verdict: Verdict, compatible: Optional[CompatibleCore] = None) -> TheoryTag:
    """The complete (or completable) theory an NIP descriptor is a model of."""
    _require_nip(verdict)
    c, p = K.char_pair
    Kv, G = K.residue_field, K.value_group
    if c == p:
        if p == 0:
            return EqChar0(Kv, G)
        return EqCharP_sd(field_of(K).imperfection_degree, Kv, G)
    if verdict.case == "b":
        return _finite_ram_tag(K)
    vp = K.value_of_p
    if compatible is not None and not compatible_check(compatible, G, vp, p):
        raise PreconditionError(f"{compatible} is not compatible with ({G}, {vp})")
    return Mixed_AlgMax(Kv, G, vp, compatible)


def completeness_hypotheses(tag: TheoryTag) -> dict:
    """The named hypotheses under which the tag's theory is known to be complete."""
    if isinstance(tag, FiniteExtOf):
        return completeness_hypotheses(tag.inner)
    k = tag.k
    good_k = {"k infinite": k.is_infinite, "k perfect": k.is_perfect, "k NIP": k.is_nip}
    if isinstance(tag, EqChar0):
        return {}
    if isinstance(tag, EqCharP_sd):
        if tag.G.is_trivial:
            return {}
        return {
            "k perfect": k.is_perfect,
            "k has no separable extension of degree divisible by p": k.no_sep_ext_div_p,
            "G p-divisible": is_p_divisible(tag.G, k.char),
        }
    p = k.char
    if isinstance(tag, Mixed_FinRam):
        cuts = gamma_cuts(tag.G, tag.gamma)
        below = quotient_and_subgroup(tag.G, cuts.minus).subgroup
        return {
            **good_k,
            "G_gamma- p-divisible": is_p_divisible(below, p),
            "gamma minimum positive modulo G_gamma-": min_positive_image(tag.G, tag.gamma),
        }
    if tag.completion is None:
        return {"compatible core supplied": False}
    return {
        **good_k,
        "G p-divisible or [-gamma,gamma] in pG": is_p_divisible(tag.G, p) or rough_p_divisible(tag.G, tag.gamma, p),
    }


def completeness_check(tag: TheoryTag) -> Tri:
    """``True`` when the completeness hypotheses hold, ``None`` when completeness is not established."""
    hyp = completeness_hypotheses(tag)
    return True if and3(*hyp.values()) is True else None


# ---------------------------------------------------------------- Cohen normal form


@dataclass(frozen=True)
class CohenNormalForm:
    cohen_residue: FieldDesc
    ext_degree: int


def cohen_normal_form(K: ValuedFieldDesc) -> CohenNormalForm:
    """A finitely ramified field with value group Z-like is (up to elementary equivalence) a finite extension of C(Kv)."""
    if not K.is_mixed:
        raise PreconditionError("Cohen normal form needs mixed characteristic")
    if structural_flags(K).henselian is not True:
        raise PreconditionError("Cohen normal form needs a henselian field")
    if not is_finitely_ramified(K):
        raise PreconditionError("Cohen normal form needs a finitely ramified field")
    vp = K.value_of_p
    return CohenNormalForm(K.residue_field, int(vp.coords[-1]))


def mixed_case(K: ValuedFieldDesc, verdict: Verdict) -> str:
    """Which of the mixed characteristic descriptions applies: A (finite k), B (imperfect k), C.i or C.ii."""
    _require_nip(verdict)
    if not K.is_mixed:
        raise PreconditionError("needs mixed characteristic")
    k = K.residue_field
    if k.is_finite is True:
        return "A"
    if k.is_perfect is False:
        return "B"
    if k.is_perfect is True and k.is_infinite is True:
        return "C.i" if verdict.case == "b" else "C.ii"
    return "undetermined"


# ---------------------------------------------------------------- Shelah families

EXHAUSTIVENESS_NOTE = (
    "membership in the family is unconditional for the valued field; that every NIP field "
    "arises this way depends on Shelah's conjecture on NIP fields"
)


@dataclass(frozen=True)
class ShelahResult:
    family: Optional[str]  # "i".."vi", "residue-level" or "outside"
    tag: Optional[TheoryTag]
    message: str
    note: str = EXHAUSTIVENESS_NOTE


def _residue_label(k: FieldDesc) -> str:
    if isinstance(k, RealClosed):
        return "real closed"
    if isinstance(k, AlgClosed):
        return "algebraically closed"
    if isinstance(k, Finite):
        return "finite"
    return str(k)


def shelah_family(K: ValuedFieldDesc, verdict: Verdict) -> ShelahResult:
    _require_nip(verdict)
    if structural_flags(K).henselian is not True:
        raise PreconditionError("family routing needs a henselian valued field")
    k = K.residue_field
    if K.is_trivial:
        family_hint = {
            RealClosed: "RCVF family applies only with nontrivial v",
            AlgClosed: "ACVF/SCVF families apply only with nontrivial v",
        }.get(type(k), "no valued-field family applies to a trivial valuation")
        return ShelahResult("residue-level", None, f"residue-level: {_residue_label(k)}, {family_hint}")
    tag = theory_of(K, verdict)
    c, p = K.char_pair
    fam = None
    if c == p == 0:
        if isinstance(k, AlgClosed):
            fam = "i"
        elif isinstance(k, RealClosed):
            fam = "ii"
    elif c == p:
        if isinstance(k, AlgClosed):
            fam = "iii"
    elif k.is_finite is True:
        fam = "iv"
    elif isinstance(k, AlgClosed):
        if verdict.case == "b":
            fam = "v"
        elif verdict.case == "c":
            cuts = gamma_cuts(K.value_group, K.value_of_p)
            upper = quotient_and_subgroup(K.value_group, cuts.plus).subgroup
            if is_p_divisible(upper, p):
                fam = "vi"
    if fam is None:
        return ShelahResult("outside", tag, f"outside the list of families: residue field {k} (case {verdict.case})")
    return ShelahResult(fam, tag, f"family ({fam}): {tag.notation()}")
