import random

import pytest

from descriptor_gen import descriptor_suite, random_group, random_positive
from nipval.classifier import classify_nip
from nipval.corpus import GOLDEN, load_corpus
from nipval.dsl import parse_valued_field
from nipval.errors import PreconditionError
from nipval.fields import AlgClosed, Finite, RealClosed
from nipval.logic import and3
from nipval.oag import NEG_INF, Q, Z, Rank1Desc, Zp, gamma_cuts, is_p_divisible, lex, quotient_and_subgroup, rough_p_divisible
from nipval.theories import (
    EqChar0,
    EqCharP_sd,
    FiniteExtOf,
    Mixed_AlgMax,
    Mixed_FinRam,
    CompatibleCore,
    cohen_normal_form,
    compatible_check,
    completeness_check,
    completeness_hypotheses,
    mixed_case,
    shelah_family,
    theory_of,
)
from nipval.valfield import structural_flags

SUITE = descriptor_suite()


def K(text):
    return parse_valued_field(text)


def nip(text):
    D = K(text)
    return D, classify_nip(D)


def _nip_corpus() -> list:
    out = [(D, classify_nip(D)) for _, D in load_corpus(GOLDEN)]
    for D in SUITE:
        if structural_flags(D).henselian is True:
            v = classify_nip(D)
            if v.outcome == "NIP":
                out.append((D, v))
    return out


NIP_CORPUS = _nip_corpus()


# ---------------------------------------------------------------- tags


def test_equal_char_zero_tag():
    tag = theory_of(*nip("hahn(triv(ACF0),Q)"))
    assert tag == EqChar0(AlgClosed(0), Q) and tag.notation() == "T(ACF0,Q)"
    assert completeness_check(tag) is True


def test_equal_char_p_tag():
    tag = theory_of(*nip("hahn(triv(Falg(5)),Q)"))
    assert isinstance(tag, EqCharP_sd) and tag.e == 0
    assert tag.notation() == "Tsd_0(Falg(5),Q)"


def test_ramified_extension_is_a_finite_extension_tag():
    tag = theory_of(*nip("hahn(Qp(5,2,3),Q)"))
    assert isinstance(tag, FiniteExtOf) and tag.degree == 6
    inner = tag.inner
    assert inner == Mixed_FinRam(0, Finite(5), lex(Q, Z), lex(Q, Z).element(0, 1))


def test_unramified_cohen_tag():
    tag = theory_of(*nip("cohen(SCF(3,2))"))
    assert isinstance(tag, Mixed_FinRam) and tag.e == 2 and tag.G == Z
    assert str(tag.gamma) == "1"


def test_case_c_tag_with_and_without_completion():
    D, v = nip("tame(Falg(5),Q,1)")
    bare = theory_of(D, v)
    assert isinstance(bare, Mixed_AlgMax) and bare.completion is None
    assert completeness_check(bare) is None
    F = CompatibleCore(Rank1Desc(NEG_INF))
    full = theory_of(D, v, F)
    assert full.notation() == "T(Falg(5),Q,1,F)" and completeness_check(full) is True


def test_incompatible_core_is_rejected():
    D, v = nip("tame(Falg(5),Q,1)")
    with pytest.raises(PreconditionError):
        theory_of(D, v, CompatibleCore(Rank1Desc(0)))


def test_ip_verdicts_get_no_tag():
    D = K("hahn(triv(Falg(5)),Z)")
    with pytest.raises(PreconditionError):
        theory_of(D, classify_nip(D))


def test_every_nip_verdict_gets_one_tag():
    for D, v in NIP_CORPUS:
        tag = theory_of(D, v)
        assert tag.notation()


# ---------------------------------------------------------------- completeness


def test_completeness_examples():
    G = lex(Q, Z)
    assert completeness_check(Mixed_FinRam(0, AlgClosed(5), G, G.element(0, 1))) is True
    assert completeness_check(Mixed_AlgMax(AlgClosed(5), Q, Q.element(1), CompatibleCore(Rank1Desc(NEG_INF)))) is True
    assert completeness_check(Mixed_FinRam(0, Finite(5), G, G.element(0, 1))) is None


def test_completeness_is_the_hypothesis_conjunction():
    tags = [theory_of(D, v) for D, v in NIP_CORPUS]
    G = lex(Q, Z)
    tags += [
        Mixed_FinRam(0, AlgClosed(5), G, G.element(0, 2)),
        Mixed_FinRam(0, AlgClosed(5), lex(Z, Z), lex(Z, Z).element(0, 1)),
        Mixed_AlgMax(AlgClosed(5), lex(Zp(5), Z), lex(Zp(5), Z).element(1, 0), CompatibleCore(Rank1Desc(0))),
    ]
    for tag in tags:
        hyp = completeness_hypotheses(tag)
        assert completeness_check(tag) == (True if and3(*hyp.values()) is True else None)
        assert completeness_check(tag) is not False


def test_finite_ramification_completeness_needs_both_group_conditions():
    for D, v in NIP_CORPUS:
        tag = theory_of(D, v)
        while isinstance(tag, FiniteExtOf):
            tag = tag.inner
        if isinstance(tag, Mixed_FinRam) and completeness_check(tag) is True:
            hyp = completeness_hypotheses(tag)
            assert hyp["G_gamma- p-divisible"] and hyp["gamma minimum positive modulo G_gamma-"]


# ---------------------------------------------------------------- compatibility


def test_compatibility_examples():
    everything = CompatibleCore(Rank1Desc(NEG_INF))
    assert compatible_check(everything, Q, Q.element(1), 5)
    G = lex(Zp(5), Z)
    gamma = G.element(1, 0)
    only_five = CompatibleCore(Rank1Desc.make(0, {5: NEG_INF}))
    assert compatible_check(only_five, G, gamma, 5)
    assert not compatible_check(everything, G, gamma, 5)
    with pytest.raises(PreconditionError):
        compatible_check(everything, Q, Q.element(-1), 5)


def test_compatibility_depends_only_on_the_floor_map():
    rng = random.Random(3)
    a = CompatibleCore(Rank1Desc.make(0, {5: NEG_INF}))
    b = CompatibleCore(Rank1Desc.make(0, {5: NEG_INF, 7: 0}))
    assert a.hull == b.hull
    for _ in range(100):
        G = random_group(rng)
        gamma = random_positive(rng, G)
        assert compatible_check(a, G, gamma, 5) == compatible_check(b, G, gamma, 5)


def test_rough_divisibility_implies_divisible_upper_subgroup():
    rng = random.Random(11)
    hits = 0
    for _ in range(400):
        G = random_group(rng)
        gamma = random_positive(rng, G)
        for p in (2, 3, 5):
            if rough_p_divisible(G, gamma, p):
                hits += 1
                upper = quotient_and_subgroup(G, gamma_cuts(G, gamma).plus).subgroup
                assert is_p_divisible(upper, p)
    assert hits > 0


# ---------------------------------------------------------------- Cohen normal form and mixed cases


def test_cohen_normal_form():
    nf = cohen_normal_form(K("Qp(5,2,1)"))
    assert nf.cohen_residue == Finite(5) and nf.ext_degree == 2
    nf = cohen_normal_form(K("cohen(SCF(3,1))"))
    assert str(nf.cohen_residue) == "SCF(3,1)" and nf.ext_degree == 1
    with pytest.raises(PreconditionError):
        cohen_normal_form(K("hahn(triv(ACF0),Q)"))


def test_mixed_cases():
    assert mixed_case(*nip("Qp(5)")) == "A"
    assert mixed_case(*nip("cohen(SCF(3,1))")) == "B"
    assert mixed_case(*nip("hahn(cohen(Falg(5)),Q)")) == "C.i"
    assert mixed_case(*nip("tame(Falg(5),Q,1)")) == "C.ii"


# ---------------------------------------------------------------- Shelah families


def test_family_examples():
    assert shelah_family(*nip("hahn(triv(ACF0),Q)")).family == "i"
    assert shelah_family(*nip("hahn(triv(RCF),lex(Z,Z))")).family == "ii"
    assert shelah_family(*nip("hahn(triv(Falg(5)),Q)")).family == "iii"
    assert shelah_family(*nip("hahn(Qp(5),Q)")).family == "iv"
    assert shelah_family(*nip("cohen(Falg(5))")).family == "v"
    assert shelah_family(*nip("tame(Falg(5),Q,1)")).family == "vi"


def test_trivial_valuation_is_residue_level():
    r = shelah_family(*nip("triv(RCF)"))
    assert r.family == "residue-level" and r.tag is None


def test_family_and_case_labels_cohere():
    seen = set()
    for D, v in NIP_CORPUS:
        fam = shelah_family(D, v).family
        seen.add(fam)
        k = D.residue_field
        if fam in ("i", "ii", "iii"):
            assert v.case == "a"
        if v.case == "a" and not D.is_trivial and (isinstance(k, (AlgClosed, RealClosed))):
            assert fam in ("i", "ii", "iii")
        is_acf = isinstance(k, AlgClosed)
        assert (fam == "v") == (v.case == "b" and is_acf)
        assert (fam == "vi") == (v.case == "c" and is_acf)
        if fam == "iv":
            assert D.is_mixed and k.is_finite is True
    assert {"i", "ii", "iii", "iv", "v", "vi"} <= seen
