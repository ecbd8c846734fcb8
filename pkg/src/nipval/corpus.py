"""Reference descriptors with known verdicts, in DSL form."""

from __future__ import annotations

from typing import NamedTuple, Optional


class CorpusEntry(NamedTuple):
    name: str
    text: str
    outcome: str
    case: Optional[str] = None
    failed_clause: Optional[str] = None
    audit_ok: Optional[bool] = True


GOLDEN = (
    CorpusEntry("C((Q))", "hahn(triv(ACF0),Q)", "NIP", "a"),
    CorpusEntry("R((lex(Z,Z)))", "hahn(triv(RCF),lex(Z,Z))", "NIP", "a"),
    CorpusEntry("F5alg((Q))", "hahn(triv(Falg(5)),Q)", "NIP", "a"),
    CorpusEntry("Q5", "Qp(5)", "NIP", "b"),
    CorpusEntry("Q5 extension e=2 f=3", "Qp(5,2,3)", "NIP", "b"),
    CorpusEntry("Cohen field over an imperfect SCVF", "cohen(scvf(5,1,Q))", "NIP", "b"),
    CorpusEntry("Q5((Q))", "hahn(Qp(5),Q)", "NIP", "b"),
    CorpusEntry("tame Kaplansky over F5alg", "tame(Falg(5),Q,1)", "NIP", "c"),
    CorpusEntry("Hahn extension of the tame field", "hahn(tame(Falg(5),Q,1),Q)", "NIP", "c"),
)

NEGATIVE = (
    CorpusEntry("F5alg((Z))", "hahn(triv(Falg(5)),Z)", "IP", "a", "2a.ii"),
    CorpusEntry(
        "finite residue, dense value group",
        "abstract{k=F(5),G=Q,gamma=1,hens=true,algmax=true}",
        "IP",
        "c",
        "3",
    ),
    CorpusEntry(
        "two imperfect coarsenings",
        "hahn(triv(SCF(3,1)),lex(Z,Z))",
        "IP",
        "a",
        "2a.ii",
        False,
    ),
)

CORPUS = GOLDEN + NEGATIVE


def load_corpus(entries=CORPUS) -> list:
    """Parse every entry; returns ``(entry, descriptor)`` pairs."""
    from .dsl import parse_valued_field

    return [(e, parse_valued_field(e.text)) for e in entries]
