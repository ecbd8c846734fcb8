"""Series literals and polynomials with series coefficients.

Grammar (whitespace is free)::

    expr    := ["+" | "-"] term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := atom ["^" power]
    atom    := INT | "t" | "X" | "z" | "(" expr ")"
    power   := elem            after "t": a group element, e.g. t^(1,0) or t^(-1)
             | INT             otherwise

``X`` is the polynomial variable (only where a polynomial is expected) and
``z`` is the generator of F_q over F_p when q is not prime.  Division is only
by monomials, which are inverted exactly.  Fractional exponents need
parentheses: ``t^(1/2)``.
"""

from __future__ import annotations

from ..dsl import Parser
from ..errors import ParseError
from ..oag import OAGDesc
from .coeffs import GF, QQ
from .series import HahnSeries


class Poly:
    """Polynomial in X with HahnSeries coefficients, lowest degree first."""

    def __init__(self, coeffs: list, group: OAGDesc, field):
        self.group, self.field = group, field
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    @classmethod
    def const(cls, s: HahnSeries) -> "Poly":
        return cls([s], s.group, s.field)

    def _zero(self) -> HahnSeries:
        return HahnSeries.zero(self.group, self.field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> HahnSeries:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self._zero()

    def __add__(self, o: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly([self.coeff(i) + o.coeff(i) for i in range(n)], self.group, self.field)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.group, self.field)

    def __sub__(self, o: "Poly") -> "Poly":
        return self + (-o)

    def __mul__(self, o: "Poly") -> "Poly":
        if not self.coeffs or not o.coeffs:
            return Poly([], self.group, self.field)
        out = [self._zero() for _ in range(len(self.coeffs) + len(o.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.group, self.field)

    def __call__(self, x: HahnSeries) -> HahnSeries:
        acc = self._zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:], self.group, self.field)

    def as_series(self) -> HahnSeries:
        if self.degree > 0:
            raise ValueError("expected a series, found a polynomial in X")
        return self.coeff(0)

    def __str__(self) -> str:
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            cs = str(c)
            if not mono:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts) if parts else "0"


class SeriesParser(Parser):
    def __init__(self, text: str, group: OAGDesc, field, allow_x: bool):
        super().__init__(text)
        self.group, self.field, self.allow_x = group, field, allow_x

    def _series(self, s: HahnSeries) -> Poly:
        return Poly.const(s)

    def _const(self, c) -> Poly:
        return self._series(HahnSeries.const(c, self.group, self.field))

    def expr(self) -> Poly:
        neg = False
        if self.accept("-"):
            neg = True
        else:
            self.accept("+")
        acc = self.term()
        if neg:
            acc = -acc
        while self.tok.text in ("+", "-") and self.tok.kind == "sym":
            op = self.next().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.tok.text in ("*", "/") and self.tok.kind == "sym":
            op = self.next().text
            tok = self.tok
            rhs = self.factor()
            if op == "*":
                acc = acc * rhs
            else:
                acc = acc * self._monomial_inverse(rhs, tok)
        return acc

    def _monomial_inverse(self, d: Poly, tok) -> Poly:
        if d.degree != 0 or len(d.coeff(0).terms) != 1:
            raise self.error("division is only by nonzero monomials", tok)
        (g, c), = d.coeff(0).terms
        try:
            inv = self.field.one / c
        except ZeroDivisionError as exc:
            raise self.error(str(exc), tok) from exc
        return self._series(HahnSeries(self.group, self.field, ((-g, inv),)))

    def factor(self) -> Poly:
        tok = self.tok
        if tok.kind == "name" and tok.text == "t":
            self.next()
            exp = self.group.zero() if self.group.is_trivial else None
            if self.accept("^"):
                etok = self.tok
                raw = self.element()
                exp = self.wrap(etok, self.group.element, raw.coords)
            elif exp is None:
                if self.group.rank != 1:
                    raise self.error(f"bare t needs an exponent in {self.group}", tok)
                exp = self.group.element(1)
            return self._series(HahnSeries(self.group, self.field, ((exp, 1),)))
        base = self.atom()
        if self.accept("^"):
            k = self.integer()
            out = self._const(1)
            for _ in range(k):
                out = out * base
            return out
        return base

    def atom(self) -> Poly:
        tok = self.tok
        if tok.kind == "num":
            return self._const(int(self.next().text))
        if tok.kind == "name" and tok.text == "X":
            if not self.allow_x:
                raise self.error("X is only allowed in a polynomial", tok)
            self.next()
            zero = HahnSeries.zero(self.group, self.field)
            return Poly([zero, HahnSeries.const(1, self.group, self.field)], self.group, self.field)
        if tok.kind == "name" and tok.text == "z":
            if not (isinstance(self.field, GF) and self.field.n > 1):
                raise self.error(f"z names the generator of F_q over F_p; the coefficient field is {self.field.name}", tok)
            self.next()
            return self._const(self.field.element(self.field.p))
        if self.accept("("):
            out = self.expr()
            self.expect(")")
            return out
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise self.error(f"expected a number, t, X or '(', found {found}")


def parse_poly(text: str, group: OAGDesc, field=QQ) -> Poly:
    p = SeriesParser(text, group, field, allow_x=True)
    out = p.expr()
    p.end()
    return out


def parse_series(text: str, group: OAGDesc, field=QQ) -> HahnSeries:
    p = SeriesParser(text, group, field, allow_x=False)
    out = p.expr()
    p.end()
    return out.as_series()


__all__ = ["Poly", "ParseError", "parse_poly", "parse_series"]
