import json

import jsonschema
import pytest

from descriptor_gen import descriptor_suite
from nipval import cli
from nipval import serialize as S
from nipval.corpus import CORPUS, load_corpus
from nipval.dsl import (
    format_descriptor,
    format_valued_field,
    parse_descriptor,
    parse_element,
    parse_field,
    parse_group,
    parse_valued_field,
)
from nipval.errors import ParseError
from nipval.fields import AlgClosed
from nipval.oag import Q, lex

SUITE = descriptor_suite()


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def validate(obj):
    jsonschema.validate(obj, S.load_schema(obj["kind"]))


# ---------------------------------------------------------------- DSL


def test_parse_print_round_trip():
    assert len(SUITE) >= 500
    for K in SUITE:
        text = format_valued_field(K)
        assert parse_valued_field(text) == K, text
        assert format_valued_field(parse_valued_field(text)) == text


def test_group_field_and_element_syntax():
    assert parse_group("lex(Q, Z)") == lex(Q, parse_group("Z"))
    assert str(parse_group("dense{3,2}")) == "dense{2,3}"
    assert str(parse_group("Z[1/5]")) == "Z[1/5]"
    assert parse_field("Falg(5)") == AlgClosed(5)
    assert parse_element("(1/2, -3)").coords == (0.5, -3)
    assert format_descriptor(parse_descriptor("Qp(5,2,3)")) == "Qp(5,2,3)"


@pytest.mark.parametrize(
    "text,column",
    [
        ("hahn(triv(ACF0),Q", 18),
        ("hahn(triv(ACF0),W)", 17),
        ("triv(F(6))", 8),
        ("Qp(5,2)", 7),
        ("abstract{G=Q}", 1),
    ],
)
def test_parse_errors_carry_positions(text, column):
    with pytest.raises(ParseError) as info:
        parse_valued_field(text)
    assert info.value.line == 1 and info.value.column == column


def test_validation_errors_surface_as_parse_errors_with_a_cause():
    with pytest.raises(ParseError) as info:
        parse_valued_field("tame(F(5),Q,1)")
    assert "Kaplansky" in info.value.message


# ---------------------------------------------------------------- JSON outputs


def _corpus_outputs(capsys):
    for entry, K in load_corpus():
        yield S.descriptor_json(K)
        for verb in ("classify", "theory", "shelah", "audit"):
            yield json.loads(run(capsys, verb, entry.text, "--json")[1])
        if K.is_mixed:
            yield json.loads(run(capsys, "decompose", entry.text, "--json")[1])
    yield json.loads(run(capsys, "theory", "tame(Falg(5),Q,1)", "--compatible", "--json")[1])
    yield json.loads(run(capsys, "classify", "abstract{k=F(5),G=Z,gamma=1,hens=false}", "--json")[1])
    yield json.loads(run(capsys, "eval", "1 + t", "--coeffs", "F5", "--invert", "--order", "4", "--json")[1])
    yield json.loads(run(capsys, "eval", "X^2 - (1 + t)", "--lift", "1", "--order", "8", "--json")[1])
    yield json.loads(run(capsys, "eval", "t^(1/2) + 1", "--group", "Q", "--order", "2", "--gauge", "1/2", "--json")[1])
    yield json.loads(run(capsys, "oracle", "--json")[1])
    yield json.loads(run(capsys, "oracle", "padic", "--json")[1])
    yield json.loads(run(capsys, "classify", "hahn(", "--json")[1])
    yield json.loads(run(capsys, "decompose", "hahn(triv(ACF0),Q)", "--json")[1])


def test_every_corpus_output_matches_its_schema(capsys):
    kinds = set()
    for obj in _corpus_outputs(capsys):
        assert obj["schema"] == S.SCHEMA_VERSION
        validate(obj)
        kinds.add(obj["kind"])
    assert kinds == set(S.KINDS)


def test_schemas_reject_unknown_fields():
    obj = S.error_json("parse", "boom", 1, 2)
    validate(obj)
    with pytest.raises(jsonschema.ValidationError):
        validate({**obj, "extra": True})
    with pytest.raises(jsonschema.ValidationError):
        validate({**obj, "error": "cosmic"})


def test_unknown_schema_kind():
    with pytest.raises(ValueError):
        S.load_schema("nonsense")


# ---------------------------------------------------------------- exit codes


EXIT_TABLE = [
    (("classify", "hahn(triv(ACF0),Q)"), 0),
    (("classify", "hahn(triv(Falg(5)),Z)"), 1),
    (("classify", "abstract{k=field{char=5,nip=true,finite=false},G=Q,hens=true}"), 2),
    (("classify", "abstract{k=F(5),G=Z,gamma=1,hens=false}"), 2),
    (("classify", "abstract{k=Falg(5),G=Z,hens=false}"), 1),
    (("audit", "hahn(triv(SCF(3,1)),lex(Z,Z))"), 1),
    (("audit", "cohen(SCF(3,1))"), 0),
    (("theory", "Qp(5,2,3)"), 0),
    (("theory", "hahn(triv(Falg(5)),Z)"), 1),
    (("shelah", "triv(RCF)"), 0),
    (("decompose", "hahn(Qp(5),Q)"), 0),
    (("oracle",), 0),
    (("oracle", "padic"), 2),
    (("eval", "1 - t", "--invert", "--order", "3"), 0),
    (("classify", "hahn(triv(ACF0),Q"), 65),
    (("classify", "tame(F(5),Q,1)"), 65),
    (("decompose", "hahn(triv(ACF0),Q)"), 65),
    (("eval", "1 - t", "--group", "Q", "--invert"), 65),
    (("eval", "X^2 - t", "--lift", "0"), 65),
    (("classify",), 64),
    (("frobnicate", "Qp(5)"), 64),
    (("classify", "Qp(5)", "--bogus"), 64),
]


@pytest.mark.parametrize("argv,code", EXIT_TABLE, ids=lambda v: " ".join(v) if isinstance(v, tuple) else str(v))
def test_exit_code_table(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_internal_errors_exit_70(capsys, monkeypatch):
    def boom(K, args):
        raise RuntimeError("unexpected")

    monkeypatch.setitem(cli.DESCRIPTOR_VERBS, "classify", boom)
    code, out, err = run(capsys, "classify", "Qp(5)", "--json")
    assert code == 70 and json.loads(out)["error"] == "internal"


def test_parse_error_report_shows_a_caret(capsys):
    code, out, err = run(capsys, "classify", "hahn(triv(ACF0),W)")
    assert code == 65 and out == ""
    lines = err.splitlines()
    assert lines[0].startswith("parse error at 1:17")
    assert lines[2].index("^") == lines[1].index("W")


def test_descriptor_errors_are_labelled(capsys):
    code, out, _ = run(capsys, "classify", "tame(F(5),Q,1)", "--json")
    assert code == 65 and json.loads(out)["error"] == "descriptor"


def test_unsupported_oracle_case_file(tmp_path, capsys):
    path = tmp_path / "cases.json"
    path.write_text(json.dumps([{"name": "wild", "base": {"kind": "laurent", "q": 5}, "steps": [{"kind": "pure", "n": 5}]}]))
    code, out, _ = run(capsys, "oracle", str(path), "--json")
    assert code == 65 and json.loads(out)["error"] == "unsupported"
    path.write_text("{not json")
    assert run(capsys, "oracle", str(path))[0] == 65


def test_oracle_precision_override(capsys):
    # 250 = 2*5^3 vanishes modulo 5^3 but is a non-unit at precision 4
    code, out, _ = run(capsys, "oracle", "padic", "--precision", "2", "--json")
    assert code == 2 and [c["status"] for c in json.loads(out)["cases"]].count("inconclusive") == 1
    code, out, _ = run(capsys, "oracle", "padic", "--precision", "4", "--json")
    assert code == 65 and "unit" in json.loads(out)["message"]


# ---------------------------------------------------------------- human reports


def test_classify_report(capsys):
    code, out, _ = run(capsys, "classify", "hahn(triv(Falg(5)),Z)", "--explain")
    assert code == 1
    assert "IP: clause 2a.ii" in out and "not 5-divisible" in out
    assert "basis:" in out


def test_decompose_report(capsys):
    code, out, _ = run(capsys, "decompose", "hahn(Qp(5),Q)")
    assert "Delta_0 = Z (cut 1)" in out and "Delta_p = trivial (cut 2)" in out
    assert "--v_0 [Q]--> Kv_0" in out


def test_theory_report(capsys):
    code, out, _ = run(capsys, "theory", "tame(Falg(5),Q,1)", "--compatible")
    assert code == 0 and "T(Falg(5),Q,1,F)" in out and "complete: yes" in out
    code, out, _ = run(capsys, "theory", "Qp(5,2,3)")
    assert "degree 6" in out and "not established" in out


def test_shelah_report(capsys):
    code, out, _ = run(capsys, "shelah", "tame(Falg(5),Q,1)")
    assert code == 0 and "family (vi)" in out


def test_eval_lift_report(capsys):
    code, out, _ = run(capsys, "eval", "X^2 - (1 + t)", "--coeffs", "F5", "--lift", "1", "--order", "5")
    assert code == 0 and "root lifting 1: 1 + 3*t + 3*t^2 + t^3" in out
    assert "at least doubles each step: yes" in out


def test_batch_mode(tmp_path, capsys):
    path = tmp_path / "batch.txt"
    path.write_text("# corpus\n" + "\n".join(e.text for e in CORPUS) + "\nhahn(\n")
    code, out, err = run(capsys, "classify", str(path), "--json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == len(CORPUS) + 1
    assert [r["outcome"] for r in rows[:-1]] == [e.outcome for e in CORPUS]
    assert rows[-1]["kind"] == "error"
    assert code == 65
    for row in rows:
        validate(row)


def test_batch_mode_text(tmp_path, capsys):
    path = tmp_path / "batch.txt"
    path.write_text("Qp(5)\nhahn(triv(Falg(5)),Z)\n")
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 1 and out.count("== ") == 2


def test_version_and_help(capsys):
    assert run(capsys, "--version")[0] == 0
    assert run(capsys, "classify", "--help")[0] == 0
