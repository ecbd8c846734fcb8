"""Text syntax for groups, fields and valued fields.

Grammar (whitespace is free)::

    group   := "Z" | "Z[1/" INT "]" | "Q" | "dense{" INT ("," INT)* "}"
             | "lex(" [group ("," group)*] ")"
    field   := "F(" INT ")" | "Falg(" INT ")" | "ACF0" | "RCF"
             | "SCF(" INT "," degree ")" | "field{" [fkey "=" value ("," ...)*] "}"
    vf      := "triv(" field ")" | "hahn(" vf "," group ")" | "Qp(" INT ["," INT "," INT] ")"
             | "cohen(" (field | vf) ")" | "tame(" field "," group "," elem ")"
             | "scvf(" INT "," degree "," group ")" | "abstract{" [akey "=" value ("," ...)*] "}"
    elem    := rational | "(" rational ("," rational)* ")"
    degree  := INT | "inf"
    fkey    := char | perfect | imp | noPext | nip | finite
    akey    := k | G | gamma | hens | defectless | sepdefectless | algmax | sepalgmax | imp

Three-valued flags take ``true``, ``false`` or ``unknown``.  Printing is the
inverse of parsing on normalized descriptors.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from sympy import factorint

from . import fields as Fd
from .errors import ParseError
from .fields import INF, AbstractField, AlgClosed, FieldDesc, Finite, RealClosed, SepClosed
from .logic import Tri
from .oag import TRIVIAL, GroupElement, OAGDesc, Q, Z, dense, lex
from .valfield import (
    AbstractCore,
    Cohen,
    CoreFlags,
    QpExt,
    ScvfCore,
    TameKaplansky,
    TrivialCore,
    ValuedFieldDesc,
    hahn,
    triv,
)

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[()\[\]{},=/+\-*^?]))")

GROUP_HEADS = {"Z", "Q", "dense", "lex"}
FIELD_HEADS = {"F", "Falg", "ACF0", "RCF", "SCF", "field"}
VF_HEADS = {"triv", "hahn", "Qp", "cohen", "tame", "scvf", "abstract"}

_ABSTRACT_FLAGS = {
    "hens": "henselian",
    "defectless": "defectless",
    "sepdefectless": "sep_defectless",
    "algmax": "alg_maximal",
    "sepalgmax": "sep_alg_maximal",
}


class Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind, self.text, self.pos = kind, text, pos

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.pos})"


def tokenize(text: str) -> list:
    out, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), start))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, self.text, tok.pos)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {text!r}, found {found}")
        return self.next()

    def name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error("expected a name")
        return self.next()

    def integer(self) -> int:
        if self.tok.kind != "num":
            raise self.error("expected an integer")
        return int(self.next().text)

    def end(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected trailing input {self.tok.text!r}")

    def wrap(self, tok: Token, fn, *args):
        """Run a constructor, re-raising descriptor errors with the source position."""
        try:
            return fn(*args)
        except ParseError:
            raise
        except (ValueError, TypeError) as exc:
            raise ParseError(str(exc), self.text, tok.pos) from exc

    # -- scalars
    def rational(self) -> Fraction:
        sign = -1 if self.accept("-") else 1
        if not sign < 0:
            self.accept("+")
        n = self.integer()
        d = 1
        if self.accept("/"):
            start = self.tok
            d = self.integer()
            if d == 0:
                raise self.error("zero denominator", start)
        return sign * Fraction(n, d)

    def degree(self):
        if self.tok.kind == "name" and self.tok.text == "inf":
            self.next()
            return INF
        return self.integer()

    def tri(self) -> Tri:
        t = self.name()
        table = {"true": True, "false": False, "unknown": None}
        if t.text not in table:
            raise self.error("expected true, false or unknown", t)
        return table[t.text]

    def element(self) -> GroupElement:
        if self.accept("("):
            coords = [self.rational()]
            while self.accept(","):
                coords.append(self.rational())
            self.expect(")")
            return GroupElement(tuple(coords))
        return GroupElement((self.rational(),))

    # -- groups
    def group(self) -> OAGDesc:
        t = self.name()
        if t.text == "Z":
            if self.accept("["):
                one = self.tok
                if self.integer() != 1:
                    raise self.error("expected Z[1/p]", one)
                self.expect("/")
                pt = self.tok
                p = self.integer()
                self.expect("]")
                return self.wrap(pt, dense, p)
            return Z
        if t.text == "Q":
            return Q
        if t.text == "dense":
            self.expect("{")
            primes = [(self.tok, self.integer())]
            while self.accept(","):
                primes.append((self.tok, self.integer()))
            self.expect("}")
            return self.wrap(primes[0][0], dense, *[p for _, p in primes])
        if t.text == "lex":
            self.expect("(")
            parts = []
            if not self.accept(")"):
                parts.append(self.group())
                while self.accept(","):
                    parts.append(self.group())
                self.expect(")")
            return lex(*parts)
        raise self.error(f"unknown group {t.text!r}", t)

    # -- fields
    def field(self) -> FieldDesc:
        t = self.name()
        if t.text == "F":
            self.expect("(")
            qt = self.tok
            q = self.integer()
            self.expect(")")
            fac = factorint(q) if q > 1 else {}
            if len(fac) != 1:
                raise self.error(f"{q} is not a prime power", qt)
            (p, n), = fac.items()
            return Finite(p, n)
        if t.text == "Falg":
            self.expect("(")
            pt = self.tok
            p = self.integer()
            self.expect(")")
            return self.wrap(pt, AlgClosed, p)
        if t.text == "ACF0":
            return AlgClosed(0)
        if t.text == "RCF":
            return RealClosed()
        if t.text == "SCF":
            self.expect("(")
            p = self.integer()
            self.expect(",")
            e = self.degree()
            self.expect(")")
            return self.wrap(t, lambda: Fd.validate(SepClosed(p, e)))
        if t.text == "field":
            kv = self.keyvals({"char", "perfect", "imp", "noPext", "nip", "finite"}, t)
            if "char" not in kv:
                raise self.error("field{...} needs char=", t)
            return self.wrap(
                t,
                lambda: Fd.validate(
                    AbstractField(kv["char"], kv.get("perfect"), kv.get("imp"), kv.get("noPext"), kv.get("nip"), kv.get("finite"))
                ),
            )
        raise self.error(f"unknown field {t.text!r}", t)

    def keyvals(self, allowed: set, head: Token) -> dict:
        self.expect("{")
        out = {}
        if self.accept("}"):
            return out
        while True:
            kt = self.name()
            if kt.text not in allowed:
                raise self.error(f"unknown key {kt.text!r}; allowed: {', '.join(sorted(allowed))}", kt)
            if kt.text in out:
                raise self.error(f"duplicate key {kt.text!r}", kt)
            self.expect("=")
            out[kt.text] = self.value_for(kt.text)
            if self.accept("}"):
                return out
            self.expect(",")

    def value_for(self, key: str):
        if key == "char":
            return self.integer()
        if key == "imp":
            return self.degree()
        if key == "k":
            return self.field()
        if key == "G":
            return self.group()
        if key == "gamma":
            return self.element()
        return self.tri()

    # -- valued fields
    def valued_field(self) -> ValuedFieldDesc:
        t = self.name()
        h = t.text
        if h == "triv":
            self.expect("(")
            k = self.field()
            self.expect(")")
            return self.wrap(t, triv, k)
        if h == "hahn":
            self.expect("(")
            K = self.valued_field()
            self.expect(",")
            gt = self.tok
            G = self.group()
            self.expect(")")
            return self.wrap(gt, hahn, K, G)
        if h == "Qp":
            self.expect("(")
            p = self.integer()
            e = f = 1
            if self.accept(","):
                e = self.integer()
                self.expect(",")
                f = self.integer()
            self.expect(")")
            return self.wrap(t, lambda: ValuedFieldDesc(TRIVIAL, QpExt(p, e, f)))
        if h == "cohen":
            self.expect("(")
            if self.tok.kind == "name" and self.tok.text in FIELD_HEADS:
                low = self.field()
            else:
                low = self.valued_field()
            self.expect(")")
            return self.wrap(t, lambda: ValuedFieldDesc(TRIVIAL, Cohen(low)))
        if h == "tame":
            self.expect("(")
            k = self.field()
            self.expect(",")
            G = self.group()
            self.expect(",")
            g = self.element()
            self.expect(")")
            return self.wrap(t, lambda: ValuedFieldDesc(TRIVIAL, TameKaplansky(k, G, g)))
        if h == "scvf":
            self.expect("(")
            p = self.integer()
            self.expect(",")
            e = self.degree()
            self.expect(",")
            G = self.group()
            self.expect(")")
            return self.wrap(t, lambda: ValuedFieldDesc(TRIVIAL, ScvfCore(p, e, G)))
        if h == "abstract":
            kv = self.keyvals({"k", "G", "gamma", "imp", *_ABSTRACT_FLAGS}, t)
            for need in ("k", "G"):
                if need not in kv:
                    raise self.error(f"abstract{{...}} needs {need}=", t)
            flags = CoreFlags(**{v: kv.get(k) for k, v in _ABSTRACT_FLAGS.items()})
            return self.wrap(
                t,
                lambda: ValuedFieldDesc(TRIVIAL, AbstractCore(kv["k"], kv["G"], kv.get("gamma"), flags, kv.get("imp"))),
            )
        raise self.error(f"unknown valued field constructor {h!r}", t)

    def any(self):
        t = self.tok
        if t.kind != "name":
            raise self.error("expected a group, field or valued field")
        if t.text in GROUP_HEADS:
            return self.group()
        if t.text in FIELD_HEADS:
            return Fd.validate(self.field())
        if t.text in VF_HEADS:
            return self.valued_field()
        raise self.error(f"unknown constructor {t.text!r}")


def parse_group(text: str) -> OAGDesc:
    p = Parser(text)
    g = p.group()
    p.end()
    return g


def parse_field(text: str) -> FieldDesc:
    p = Parser(text)
    k = p.field()
    p.end()
    return Fd.validate(k)


def parse_valued_field(text: str) -> ValuedFieldDesc:
    p = Parser(text)
    K = p.valued_field()
    p.end()
    return K


def parse_element(text: str) -> GroupElement:
    p = Parser(text)
    x = p.element()
    p.end()
    return x


def parse_descriptor(text: str) -> Union[ValuedFieldDesc, OAGDesc, FieldDesc]:
    p = Parser(text)
    out = p.any()
    p.end()
    return out


# ---------------------------------------------------------------- printing


def _tri(v: Tri) -> str:
    return {True: "true", False: "false", None: "unknown"}[v]


def _deg(e) -> str:
    return "inf" if e == INF else str(e)


def format_core(c) -> str:
    if isinstance(c, TrivialCore):
        return f"triv({c.k})"
    if isinstance(c, QpExt):
        return f"Qp({c.p},{c.e},{c.f})"
    if isinstance(c, Cohen):
        low = c.lower
        if low.is_trivial:
            return f"cohen({low.core.k})"
        return f"cohen({format_valued_field(low)})"
    if isinstance(c, TameKaplansky):
        return f"tame({c.k},{c.G},{c.gamma_p})"
    if isinstance(c, ScvfCore):
        return f"scvf({c.p},{_deg(c.e)},{c.G})"
    parts = [f"k={c.k}", f"G={c.G}"]
    if c.gamma_p is not None:
        parts.append(f"gamma={c.gamma_p}")
    for key, attr in _ABSTRACT_FLAGS.items():
        v = getattr(c.flags, attr)
        if v is not None:
            parts.append(f"{key}={_tri(v)}")
    if c.imperfection is not None and c.gamma_p is None and c.k.char > 0:
        parts.append(f"imp={_deg(c.imperfection)}")
    return "abstract{" + ",".join(parts) + "}"


def format_valued_field(K: ValuedFieldDesc) -> str:
    inner = format_core(K.core)
    if K.layer.is_trivial:
        return inner
    return f"hahn({inner},{K.layer})"


def format_descriptor(obj) -> str:
    if isinstance(obj, ValuedFieldDesc):
        return format_valued_field(obj)
    return str(obj)
