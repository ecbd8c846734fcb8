"""NIP decision procedure for henselian valued-field descriptors.

The clauses are evaluated in a fixed order and every visited clause lands in the
trail, so a verdict can be audited line by line:

* ``1``      the residue field is NIP;
* ``2a.*``   equal characteristic, and trivial or separably defectless Kaplansky;
* ``2b.*``   mixed characteristic, ``(K, v_p)`` finitely ramified and
             ``(Kv_p, v-bar)`` trivial or separably defectless Kaplansky;
* ``2c.*``   mixed characteristic and ``(Kv_0, v-bar)`` defectless Kaplansky;
* ``3``      a finite residue field forces ``(K, v)`` trivial or finitely ramified.

For mixed characteristic exactly one of ``2b``/``2c`` can hold; which one is
tried is decided by whether ``Delta_0 / Delta_p`` is discrete.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import fields as Fd
from .errors import PreconditionError, UnsupportedCut
from .fields import FieldDesc
from .logic import Tri, and3, show
from .oag import ConvexCut, OAGDesc, is_p_divisible, quotient_and_subgroup
from .valfield import (
    ScvfCore,
    TameKaplansky,
    ValuedFieldDesc,
    coarsen_at,
    field_of,
    is_finitely_ramified,
    standard_decomposition,
    structural_flags,
)

BASIS = {
    "1": "the residue field is interpretable in the valued field",
    "2a": "equal characteristic transfer: a separably algebraically maximal Kaplansky field is NIP iff its residue field is",
    "2a.trivial": "a trivially valued field is NIP iff the field is",
    "2a.char0": "equal characteristic 0 transfer: NIP iff the residue field is",
    "2b": "finitely ramified transfer: NIP iff (Kv_p, v-bar) is NIP",
    "2c": "algebraically maximal Kaplansky transfer with stably embedded residue field",
    "3": "finite residue fields admit no infinite ramification in NIP valued fields",
    "routing": "case routing",
}


@dataclass(frozen=True)
class Clause:
    clause: str
    result: Tri
    detail: str
    basis: str = ""
    decisive: bool = True  # routing records only steer the case split

    def as_dict(self) -> dict:
        return {"clause": self.clause, "basis": self.basis, "result": show(self.result), "detail": self.detail}


@dataclass(frozen=True)
class Verdict:
    outcome: str  # "NIP" | "IP" | "Unknown"
    case: Optional[str] = None
    trail: tuple = ()
    failed_clause: Optional[str] = None
    failed_clauses: tuple = ()
    witness: Optional[str] = None
    missing: tuple = ()

    @property
    def is_nip(self) -> bool:
        return self.outcome == "NIP"

    def summary(self) -> str:
        if self.outcome == "NIP":
            return f"NIP (case {self.case})"
        if self.outcome == "IP":
            return f"IP: clause {self.failed_clause}: {self.witness}"
        return "Unknown: undetermined " + ", ".join(self.missing)


# ---------------------------------------------------------------- helpers


def kaplansky_parts(G: OAGDesc, k: FieldDesc, p: int) -> list:
    """The three Kaplansky conditions as ``(result, holds, fails)`` triples."""
    if p == 0:
        return [(True, "residue characteristic 0", "")]
    return [
        (is_p_divisible(G, p), f"value group {G} is {p}-divisible", f"value group {G} is not {p}-divisible"),
        (k.is_perfect, f"residue field {k} is perfect", f"residue field {k} is imperfect"),
        (
            k.no_sep_ext_div_p,
            f"residue field {k} has no separable extension of degree divisible by {p}",
            f"residue field {k} has a separable extension of degree divisible by {p}",
        ),
    ]


def _kaplansky(G: OAGDesc, k: FieldDesc, p: int) -> tuple:
    parts = kaplansky_parts(G, k, p)
    result = and3(*(r for r, _, _ in parts))
    bad = [no for r, _, no in parts if r is False]
    unknown = [yes for r, yes, _ in parts if r is None]
    if bad:
        why = "not Kaplansky: " + "; ".join(bad)
    elif unknown:
        why = "Kaplansky undetermined: unknown whether " + "; ".join(unknown)
    else:
        why = "Kaplansky"
    return result, why


def _subgroup(G: OAGDesc, cut: ConvexCut) -> OAGDesc:
    return quotient_and_subgroup(G, cut).subgroup


def _flag_phrase(name: str, value: Tri) -> str:
    return {True: name, False: "not " + name, None: name + " unknown"}[value]


# ---------------------------------------------------------------- clause evaluation


def evaluate_clauses(K: ValuedFieldDesc) -> tuple:
    """Return ``(trail, case)``; ``case`` is the branch of clause 2 that applies."""
    trail = []
    Kv = K.residue_field
    c, p = K.char_pair
    trail.append(Clause("1", Kv.is_nip, f"residue field {Kv}: NIP flag {show(Kv.is_nip)}", BASIS["1"]))

    if c == p:
        case = "a"
        trail.append(Clause("2a.i", True, f"equal characteristic {c}", BASIS["routing"], decisive=False))
        if K.is_trivial:
            trail.append(Clause("2a.ii", True, "trivial valuation", BASIS["2a.trivial"]))
        else:
            sep = structural_flags(K).sep_defectless
            kap, why = _kaplansky(K.value_group, Kv, p)
            res = and3(sep, kap)
            detail = f"{_flag_phrase('separably defectless', sep)}; {why}"
            basis = BASIS["2a.char0"] if p == 0 else BASIS["2a"]
            trail.append(Clause("2a.ii", res, detail, basis))
    else:
        G, vp = K.value_group, K.value_of_p
        dec = standard_decomposition(K)
        trail.append(Clause("2b.i", True, f"mixed characteristic (0,{p}), v(p) = {vp}", BASIS["routing"], decisive=False))
        quot = OAGDesc(G.summands[dec.delta_0.index:dec.delta_p.index])
        fin = dec.quotient_discrete
        trail.append(
            Clause(
                "2b.ii",
                fin,
                f"Delta_0/Delta_p = {quot} is {'discrete' if fin else 'dense'}: (K,v_p) "
                + ("finitely ramified" if fin else "not finitely ramified"),
                BASIS["routing"],
                decisive=False,
            )
        )
        if fin:
            case = "b"
            delta_p = _subgroup(G, dec.delta_p)
            if delta_p.is_trivial:
                trail.append(Clause("2b.iii", True, "Delta_p is trivial, so (Kv_p, v-bar) is trivially valued", BASIS["2b"]))
            else:
                sep = _residue_sep_defectless(K, dec)
                kap, why = _kaplansky(delta_p, Kv, p)
                trail.append(
                    Clause(
                        "2b.iii",
                        and3(sep, kap),
                        f"(Kv_p, v-bar) with value group {delta_p}: {_flag_phrase('separably defectless', sep)}; {why}",
                        BASIS["2b"],
                    )
                )
        else:
            case = "c"
            trail.append(Clause("2c.i", True, f"mixed characteristic (0,{p})", BASIS["routing"], decisive=False))
            delta_0 = _subgroup(G, dec.delta_0)
            # (K, v_0) has residue characteristic 0 and so no defect: the
            # defect of K lives entirely in (Kv_0, v-bar).
            defl = structural_flags(K).defectless
            kap, why = _kaplansky(delta_0, Kv, p)
            trail.append(
                Clause(
                    "2c.ii",
                    and3(defl, kap),
                    f"(Kv_0, v-bar) with value group {delta_0}: {_flag_phrase('defectless', defl)}; {why}",
                    BASIS["2c"],
                )
            )

    fin_k = Kv.is_finite
    if fin_k is False:
        trail.append(Clause("3", True, f"residue field {Kv} is infinite", BASIS["3"]))
    else:
        if K.is_trivial:
            ok, why = True, "trivial valuation"
        elif K.is_mixed:
            ok = is_finitely_ramified(K)
            why = f"[0, v(p)] in {K.value_group} is " + ("finite" if ok else "infinite")
        else:
            ok, why = False, "nontrivial equal characteristic valuation is not finitely ramified"
        res = ok if fin_k is True else (True if ok else None)
        lead = f"residue field {Kv} is finite" if fin_k else f"finiteness of {Kv} unknown"
        trail.append(Clause("3", res, f"{lead}; {why}", BASIS["3"]))
    return tuple(trail), case


def _residue_sep_defectless(K: ValuedFieldDesc, dec) -> Tri:
    if dec.Kvp_vbar is not None:
        return structural_flags(dec.Kvp_vbar).sep_defectless
    if structural_flags(K).defectless is True:
        return True
    if isinstance(K.core, TameKaplansky):
        return True
    return None


def _verdict(trail: tuple, case: str) -> Verdict:
    decisive = [r for r in trail if r.decisive]
    failed = tuple(r.clause for r in decisive if r.result is False)
    if failed:
        first = next(r for r in decisive if r.result is False)
        return Verdict("IP", case, trail, first.clause, failed, first.detail)
    missing = tuple(r.clause for r in decisive if r.result is None)
    if missing:
        return Verdict("Unknown", case, trail, missing=missing)
    return Verdict("NIP", case, trail)


def clause_verdict(K: ValuedFieldDesc) -> Verdict:
    """The verdict the clauses give, without the henselian precondition."""
    return _verdict(*evaluate_clauses(K))


def classify_nip(K: ValuedFieldDesc) -> Verdict:
    """Decide NIP for a henselian descriptor."""
    hens = structural_flags(K).henselian
    if hens is not True:
        raise PreconditionError(
            f"classification needs a henselian valued field (henselian: {show(hens)}); "
            "use necessary_conditions or classify the henselization"
        )
    return _verdict(*evaluate_clauses(K))


@dataclass(frozen=True)
class NecessaryResult:
    refuted: bool
    trail: tuple
    failed_clauses: tuple = ()
    note: str = ""


def necessary_conditions(K: ValuedFieldDesc) -> NecessaryResult:
    """Check the conditions every NIP valued field satisfies, henselian or not."""
    trail, _ = evaluate_clauses(K)
    failed = tuple(r.clause for r in trail if r.decisive and r.result is False)
    hens = structural_flags(K).henselian
    if failed:
        note = "a necessary condition fails, so the valued field has IP"
    elif hens is True:
        note = "henselian input: use classify_nip for the full decision"
    else:
        note = (
            "no necessary condition fails; for a field that is not known to be henselian "
            "this gives no NIP conclusion (its henselization can be classified instead)"
        )
    return NecessaryResult(bool(failed), trail, failed, note)


# ---------------------------------------------------------------- imperfect coarsening audit


@dataclass(frozen=True)
class AuditReport:
    ok: Tri
    offending_cuts: tuple
    imperfect_cuts: tuple
    unknown_cuts: tuple
    coarsest_char_p_cut: Optional[int]
    residues: tuple = field(default=())  # (cut, field-or-None)


def residue_field_at(K: ValuedFieldDesc, cut: int) -> Optional[FieldDesc]:
    """Residue field of the coarsening at ``cut``; ``None`` when the descriptor does not determine it."""
    try:
        return field_of(coarsen_at(K, cut).residue)
    except UnsupportedCut:
        pass
    if K.is_mixed and cut <= K.value_of_p.leading_index():
        return Fd.AbstractField(0, True, 0, None, None, False)
    core = K.core
    p = K.char_pair[1]
    if isinstance(core, (TameKaplansky, ScvfCore)):
        # coarsenings of tame and of separably closed valued fields have perfect residue fields
        return Fd.AbstractField(p, True, 0, None, None, None)
    return None


def imperfect_coarsening_audit(K: ValuedFieldDesc) -> AuditReport:
    """At most one coarsening may have an imperfect residue field, and only the coarsest of residue characteristic p."""
    n = K.value_group.rank
    residues = tuple((c, residue_field_at(K, c)) for c in range(n + 1))
    c0, p = K.char_pair
    if p == 0:
        coarsest = None
    elif c0 == p:
        coarsest = 0
    else:
        coarsest = K.value_of_p.leading_index() + 1
    imperfect = tuple(c for c, k in residues if k is not None and k.is_perfect is False)
    unknown = tuple(c for c, k in residues if k is None or k.is_perfect is None)
    offending = tuple(c for c in imperfect if c != coarsest)
    if offending:
        ok: Tri = False
    elif unknown:
        ok = None
    else:
        ok = True
    return AuditReport(ok, offending, imperfect, unknown, coarsest, residues)
