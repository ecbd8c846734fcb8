"""Stable JSON shapes for reports.  Every object carries ``schema: 1`` and a ``kind``.

The matching JSON Schema documents ship in ``nipval/schemas/<kind>.json``.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Optional

from .classifier import AuditReport, NecessaryResult, Verdict
from .dsl import format_core, format_valued_field
from .hahn.series import val_res
from .oag import INFINITY, OAGDesc, quotient_and_subgroup
from .theories import (
    EqCharP_sd,
    FiniteExtOf,
    Mixed_AlgMax,
    Mixed_FinRam,
    ShelahResult,
    completeness_check,
    completeness_hypotheses,
    tag_kind,
)
from .valfield import (
    AbstractCore,
    Cohen,
    Decomposition,
    QpExt,
    ScvfCore,
    TameKaplansky,
    TrivialCore,
    ValuedFieldDesc,
    structural_flags,
)

SCHEMA_VERSION = 1

KINDS = (
    "descriptor",
    "decomposition",
    "verdict",
    "necessary",
    "theory",
    "shelah",
    "audit",
    "series",
    "oracle",
    "error",
)


def _envelope(kind: str, **body) -> dict:
    return {"schema": SCHEMA_VERSION, "kind": kind, **body}


def _vf(K: Optional[ValuedFieldDesc]) -> Optional[str]:
    return None if K is None else format_valued_field(K)


def _degree(e):
    if e is None:
        return None
    return "inf" if e == float("inf") else e


_CORE_TYPES = {
    TrivialCore: "trivial",
    QpExt: "qp_extension",
    Cohen: "cohen",
    TameKaplansky: "tame_kaplansky",
    ScvfCore: "scvf",
    AbstractCore: "abstract",
}


def descriptor_json(K: ValuedFieldDesc) -> dict:
    flags = structural_flags(K)
    c, p = K.char_pair
    vp = K.value_of_p if K.is_mixed else None
    return _envelope(
        "descriptor",
        text=format_valued_field(K),
        layer=str(K.layer),
        core={"type": _CORE_TYPES[type(K.core)], "text": format_core(K.core)},
        char_pair=[c, p],
        value_group=str(K.value_group),
        residue_field=str(K.residue_field),
        value_of_p=None if vp is None else str(vp),
        flags=flags.as_dict(),
    )


def _convex(G: OAGDesc, cut) -> dict:
    sub = quotient_and_subgroup(G, cut).subgroup
    return {"cut": cut.index, "group": str(sub), "trivial": sub.is_trivial}


def decomposition_json(K: ValuedFieldDesc, d: Decomposition) -> dict:
    G = K.value_group
    quotient = OAGDesc(G.summands[d.delta_0.index:d.delta_p.index])
    chain = [
        {"from": "K", "to": "Kv_0", "valuation": "v_0", "group": str(quotient_and_subgroup(G, d.delta_0).quotient)},
        {"from": "Kv_0", "to": "Kv_p", "valuation": "v-bar_p", "group": str(quotient)},
        {"from": "Kv_p", "to": "Kv", "valuation": "v-bar", "group": str(quotient_and_subgroup(G, d.delta_p).subgroup)},
    ]
    return _envelope(
        "decomposition",
        input=format_valued_field(K),
        value_group=str(G),
        value_of_p=str(K.value_of_p),
        delta_p=_convex(G, d.delta_p),
        delta_0=_convex(G, d.delta_0),
        quotient=str(quotient),
        quotient_discrete=d.quotient_discrete,
        chain=chain,
        pieces={
            "K_with_v0": _vf(d.upper),
            "Kv0_with_vbar": _vf(d.K_v0),
            "Kv0_with_vbar_p": _vf(d.Kv0_vbar_p),
            "Kvp_with_vbar": _vf(d.Kvp_vbar),
            "K_with_vp": _vf(d.K_vp),
        },
        notes=list(d.notes),
    )


def verdict_json(K: ValuedFieldDesc, v: Verdict) -> dict:
    return _envelope(
        "verdict",
        input=format_valued_field(K),
        outcome=v.outcome,
        case=v.case,
        summary=v.summary(),
        failed_clause=v.failed_clause,
        failed_clauses=list(v.failed_clauses),
        witness=v.witness,
        missing=list(v.missing),
        trail=[c.as_dict() for c in v.trail],
    )


def necessary_json(K: ValuedFieldDesc, r: NecessaryResult) -> dict:
    return _envelope(
        "necessary",
        input=format_valued_field(K),
        refuted=r.refuted,
        failed_clauses=list(r.failed_clauses),
        note=r.note,
        trail=[c.as_dict() for c in r.trail],
    )


def tag_json(tag) -> dict:
    out = {"type": tag_kind(tag), "notation": tag.notation()}
    if isinstance(tag, FiniteExtOf):
        out["degree"] = tag.degree
        out["inner"] = tag_json(tag.inner)
        return out
    out["k"] = str(tag.k)
    out["G"] = str(tag.G)
    if isinstance(tag, (EqCharP_sd, Mixed_FinRam)):
        out["e"] = _degree(tag.e)
    if isinstance(tag, (Mixed_FinRam, Mixed_AlgMax)):
        out["gamma"] = str(tag.gamma)
    if isinstance(tag, Mixed_AlgMax):
        out["completion"] = None if tag.completion is None else str(tag.completion)
    return out


def theory_json(K: ValuedFieldDesc, v: Verdict, tag, mixed: Optional[str] = None) -> dict:
    hyp = completeness_hypotheses(tag)
    return _envelope(
        "theory",
        input=format_valued_field(K),
        outcome=v.outcome,
        case=v.case,
        tag=tag_json(tag),
        complete=completeness_check(tag),
        hypotheses=dict(hyp),
        mixed_case=mixed,
    )


def shelah_json(K: ValuedFieldDesc, r: ShelahResult) -> dict:
    return _envelope(
        "shelah",
        input=format_valued_field(K),
        family=r.family,
        tag=None if r.tag is None else tag_json(r.tag),
        message=r.message,
        note=r.note,
    )


def audit_json(K: ValuedFieldDesc, a: AuditReport) -> dict:
    return _envelope(
        "audit",
        input=format_valued_field(K),
        ok=a.ok,
        offending_cuts=list(a.offending_cuts),
        imperfect_cuts=list(a.imperfect_cuts),
        unknown_cuts=list(a.unknown_cuts),
        coarsest_char_p_cut=a.coarsest_char_p_cut,
        residues=[{"cut": c, "field": None if k is None else str(k)} for c, k in a.residues],
    )


def _value(v) -> str:
    return "inf" if v is INFINITY else str(v)


def series_json(text: str, group: OAGDesc, coeffs: str, value, extra: Optional[dict] = None) -> dict:
    vr = val_res(value)
    return _envelope(
        "series",
        input=text,
        group=str(group),
        coeffs=coeffs,
        value=str(value),
        valuation=_value(vr.v),
        residue=str(vr.res),
        **(extra or {}),
    )


def oracle_case_json(name: str, r) -> dict:
    return {
        "name": name,
        "base": r.base,
        "status": r.status,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "terms": [list(t) for t in r.terms],
        "equal": r.equal,
        "detail": r.detail,
        "steps": [
            {"step": str(s.step), "degree": s.degree, "e": s.e, "f": s.f, "residue_size": s.residue_size}
            for s in r.steps
        ],
    }


def oracle_json(results: list, symbolic: dict) -> dict:
    return _envelope(
        "oracle",
        cases=[oracle_case_json(n, r) for n, r in results],
        symbolic_defectless=symbolic,
    )


def error_json(category: str, message: str, line: Optional[int] = None, column: Optional[int] = None) -> dict:
    return _envelope("error", error=category, message=message, line=line, column=column)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def load_schema(kind: str) -> dict:
    if kind not in KINDS:
        raise ValueError(f"no schema for kind {kind!r}")
    text = resources.files("nipval").joinpath("schemas", f"{kind}.json").read_text()
    return json.loads(text)


__all__ = [
    "KINDS",
    "SCHEMA_VERSION",
    "audit_json",
    "decomposition_json",
    "descriptor_json",
    "dumps",
    "error_json",
    "load_schema",
    "necessary_json",
    "oracle_json",
    "series_json",
    "shelah_json",
    "tag_json",
    "theory_json",
    "verdict_json",
]
