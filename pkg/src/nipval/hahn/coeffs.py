"""Exact coefficient fields: the rationals and small finite fields F_q.

F_q for q = p^n is represented on integer codes ``0..q-1`` read as base-p
digit vectors (polynomials over F_p modulo a fixed irreducible).
Multiplication goes through exp/log tables of a primitive element.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from sympy import factorint

MAX_ORDER = 1 << 16


class Rationals:
    name = "Q"
    char = 0
    order = None

    def coerce(self, x) -> Fraction:
        if isinstance(x, FqElem):
            raise TypeError("finite field element used as a rational coefficient")
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"


QQ = Rationals()


def _poly_mulmod(a: list, b: list, mod: list, p: int) -> list:
    """Multiply coefficient lists (low degree first) and reduce by the monic ``mod``."""
    n = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for d in range(len(out) - 1, n - 1, -1):
        c = out[d]
        if c:
            for k in range(n + 1):
                out[d - n + k] = (out[d - n + k] - c * mod[k]) % p
    return (out + [0] * n)[:n]


def _is_irreducible(mod: list, p: int) -> bool:
    """Brute force: no monic factor of degree 1..n/2."""
    n = len(mod) - 1
    for d in range(1, n // 2 + 1):
        for coeffs in product(range(p), repeat=d):
            g = list(coeffs) + [1]
            # polynomial remainder of mod by g
            r = list(mod)
            for top in range(n, d - 1, -1):
                c = r[top]
                if c:
                    for k in range(d + 1):
                        r[top - d + k] = (r[top - d + k] - c * g[k]) % p
            if not any(r[:d]):
                return False
    return True


class GF:
    """The finite field with ``q`` elements."""

    def __init__(self, q: int):
        if q > MAX_ORDER:
            raise ValueError(f"finite fields are limited to q <= {MAX_ORDER}")
        fac = factorint(q) if q > 1 else {}
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        (p, n), = fac.items()
        self.q, self.p, self.n = q, p, n
        self.char = p
        self.order = q
        self.name = f"F{q}"
        self.modulus = None
        if n > 1:
            for coeffs in product(range(p), repeat=n):
                mod = list(coeffs) + [1]
                if coeffs[0] and _is_irreducible(mod, p):
                    self.modulus = mod
                    break
        self._build_tables()

    def _digits(self, code: int) -> list:
        out = []
        for _ in range(self.n):
            code, d = divmod(code, self.p)
            out.append(d)
        return out

    def _code(self, digits: list) -> int:
        c = 0
        for d in reversed(digits):
            c = c * self.p + d
        return c

    def _mul_codes(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        return self._code(_poly_mulmod(self._digits(a), self._digits(b), self.modulus, self.p))

    def _build_tables(self) -> None:
        q = self.q
        for g in range(2 if q > 2 else 1, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._mul_codes(x, g)
            if len(exp) == q - 1:
                break
        self.generator = g
        self.exp = exp
        self.log = {v: i for i, v in enumerate(exp)}

    # -- arithmetic on codes
    def add_codes(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._code([(x + y) % self.p for x, y in zip(da, db)])

    def neg_code(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        return self._code([(-x) % self.p for x in self._digits(a)])

    def mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    # -- elements
    def __call__(self, x) -> "FqElem":
        return self.coerce(x)

    def coerce(self, x) -> "FqElem":
        if isinstance(x, FqElem):
            if x.field != self:
                raise TypeError(f"element of {x.field.name} used in {self.name}")
            return x
        x = Fraction(x)
        num = FqElem(self, x.numerator % self.p)
        den = x.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator {x.denominator} vanishes in {self.name}")
        return num * FqElem(self, self.inv_code(den))

    def element(self, code: int) -> "FqElem":
        return FqElem(self, code)

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    @property
    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def elements(self):
        return [FqElem(self, c) for c in range(self.q)]

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    return GF(q)


class FqElem:
    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        self.field = field
        self.code = code

    def _other(self, o) -> "FqElem":
        return self.field.coerce(o)

    def __add__(self, o):
        o = self._other(o)
        return FqElem(self.field, self.field.add_codes(self.code, o.code))

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, self.field.neg_code(self.code))

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        o = self._other(o)
        return FqElem(self.field, self.field.mul_codes(self.code, o.code))

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        return FqElem(self.field, self.field.inv_code(self.code))

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self._other(o) * self.inverse()

    def __pow__(self, k: int):
        if self.code == 0:
            if k < 0:
                raise ZeroDivisionError("0 to a negative power")
            return FqElem(self.field, 0 if k else 1)
        f = self.field
        return FqElem(f, f.exp[(f.log[self.code] * k) % (f.q - 1)])

    def __bool__(self):
        return self.code != 0

    def __eq__(self, o):
        if isinstance(o, FqElem):
            return o.field == self.field and o.code == self.code
        try:
            return self.code == self._other(o).code
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __str__(self):
        f = self.field
        if f.n == 1:
            return str(self.code)
        digits = f._digits(self.code)
        terms = []
        for i, d in enumerate(digits):
            if d:
                mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
                terms.append(str(d) if i == 0 else (mono if d == 1 else f"{d}*{mono}"))
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"{self.field.name}({self})"


def coeff_field(name: str):
    """``"Q"`` or ``"F<q>"`` (also accepts ``"GF(q)"``)."""
    s = name.strip()
    if s in ("Q", "QQ"):
        return QQ
    if s.startswith("GF(") and s.endswith(")"):
        return gf(int(s[3:-1]))
    if s.startswith("F") and s[1:].isdigit():
        return gf(int(s[1:]))
    raise ValueError(f"unknown coefficient field {name!r}; use Q or F<q>")


def field_name(field) -> str:
    return field.name
