"""Brute-force check of ``[L:K] = e*f`` for tame towers of pure extensions.

A tower is built over ``F_q((t))`` (value group Z) or over Q_p, one step at a
time.  Each step adjoins a root of ``X^n - c*s^k`` where ``s`` is a uniformizer
of the current field and ``c`` a nonzero constant from the base residue field.
Both sides are computed by separate routes:

* ``[L:K]`` is the product of the step degrees, each certified irreducible by
  Capelli's criterion (``a`` is not an l-th power for primes ``l | n`` and not
  in ``-4K^4`` when ``4 | n``);
* ``e`` is the index of the old value group in the group generated by it and
  ``v(root)``; ``f`` is the least ``j`` for which the residue equation
  ``Y^g = c`` acquires a root in the degree-``j`` residue extension.

Since the fields are henselian there is one prolongation per step, so the
right-hand side has one term.  Only tame steps (``p`` not dividing ``n``) are
supported: wild ramification is where defect lives, and it is out of reach here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from sympy import factorint, isprime

from ..errors import UnsupportedExtension
from .coeffs import GF, gf


@dataclass(frozen=True)
class LaurentBase:
    """``F_q((t))``: Hahn series with exponents in Z."""

    q: int

    def __str__(self):
        return f"F{self.q}((Z))"


@dataclass(frozen=True)
class PadicBase:
    """Q_p with constants known modulo ``p^precision``."""

    p: int
    precision: int

    def __str__(self):
        return f"Qp({self.p}) at precision {self.precision}"


Base = Union[LaurentBase, PadicBase]


@dataclass(frozen=True)
class PureStep:
    """Adjoin a root of ``X^n - c*s^k``."""

    n: int
    c: int = 1
    k: int = 1

    def __str__(self):
        return f"X^{self.n} - {self.c}*s^{self.k}"


def root_of_uniformizer(n: int) -> PureStep:
    return PureStep(n, 1, 1)


def unramified(m: int, c: int) -> PureStep:
    return PureStep(m, c, 0)


@dataclass(frozen=True)
class StepReport:
    step: PureStep
    degree: int
    e: int
    f: int
    residue_size: int
    value_group_denominator: int


@dataclass(frozen=True)
class OracleResult:
    base: str
    status: str  # "ok" | "inconclusive"
    lhs: Optional[int] = None
    rhs: Optional[int] = None
    terms: tuple = ()  # (e, f) per prolongation
    equal: Optional[bool] = None
    steps: tuple = field(default=())
    detail: str = ""


def _residue_field(base: Base) -> GF:
    if isinstance(base, LaurentBase):
        return gf(base.q)
    return gf(base.p)


def _is_power(c, ell: int, Q: int) -> bool:
    """Is ``c`` (an element of the base residue field) an ell-th power in ``F_Q``?"""
    F = c.field
    order = (F.q - 1) // gcd(F.log[c.code], F.q - 1)
    return ((Q - 1) // gcd(ell, Q - 1)) % order == 0


def _is_pure_power(c, k: int, ell: int, Q: int) -> bool:
    """Is ``c*s^k`` an ell-th power, for a uniformizer ``s`` and ell prime to p?"""
    return k % ell == 0 and _is_power(c, ell, Q)


def _group_generator(a: Fraction, b: Fraction) -> Fraction:
    """Positive generator of the subgroup of Q generated by ``a`` and ``b``."""
    num = gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


def _least_residue_degree(c, g: int, Q: int) -> int:
    j = 1
    while not _is_power(c, g, Q**j):
        j += 1
    return j


def _constant(base: Base, raw) -> object:
    F = _residue_field(base)
    if isinstance(base, PadicBase):
        modulus = base.p**base.precision
        if raw % modulus == 0:
            return None
        if raw % base.p == 0:
            raise UnsupportedExtension(f"constant {raw} is not a {base.p}-adic unit")
        return F.coerce(raw % base.p)
    c = F.coerce(raw)
    if c == 0:
        raise UnsupportedExtension("the constant c must be nonzero")
    return c


def fundamental_equality_oracle(base: Base, steps) -> OracleResult:
    if isinstance(base, PadicBase):
        if not isprime(base.p):
            raise UnsupportedExtension(f"{base.p} is not a prime")
        if base.precision < 1:
            raise UnsupportedExtension("precision must be at least 1")
    elif not isinstance(base, LaurentBase):
        raise UnsupportedExtension(f"unsupported base {base!r}")
    F = _residue_field(base)
    p = F.p
    Q = F.q  # size of the current residue field
    unit = Fraction(1)  # generator of the current value group
    lhs, e_total, f_total = 1, 1, 1
    reports = []
    for step in steps:
        if not isinstance(step, PureStep):
            raise UnsupportedExtension(f"unsupported extension kind {type(step).__name__}")
        n, k = step.n, step.k
        if n < 1 or k < 0:
            raise UnsupportedExtension(f"{step}: need n >= 1 and k >= 0")
        if n % p == 0:
            raise UnsupportedExtension(f"{step}: degree divisible by the residue characteristic {p} (wild)")
        c = _constant(base, step.c)
        if c is None:
            return OracleResult(
                str(base),
                "inconclusive",
                steps=tuple(reports),
                detail=f"inconclusive at this precision: constant {step.c} vanishes modulo {base.p}^{base.precision}",
            )
        for ell in factorint(n):
            if _is_pure_power(c, k, ell, Q):
                raise UnsupportedExtension(f"{step} is reducible: c*s^k has a root of order {ell}")
        if n % 4 == 0 and _is_pure_power(-c / 4, k, 4, Q):
            raise UnsupportedExtension(f"{step} is reducible: c*s^k lies in -4K^4")
        # value group: add v(root) = k*unit/n
        new_unit = _group_generator(unit, unit * k / n) if k else unit
        e = int(unit / new_unit)
        # residue: root^e / s^(k/g) satisfies Y^g = c with g = n/e
        g = n // e
        f = _least_residue_degree(c, g, Q)
        lhs *= n
        e_total *= e
        f_total *= f
        Q = Q**f
        unit = new_unit
        reports.append(StepReport(step, n, e, f, Q, unit.denominator))
    rhs = e_total * f_total
    return OracleResult(str(base), "ok", lhs, rhs, ((e_total, f_total),), lhs == rhs, tuple(reports))


# ---------------------------------------------------------------- catalogue

CATALOGUE = (
    ("F5: t^(1/3)", LaurentBase(5), (root_of_uniformizer(3),)),
    ("F5: unramified 2 via X^2 - 2", LaurentBase(5), (unramified(2, 2),)),
    ("F5: t^(1/3) then unramified 2", LaurentBase(5), (root_of_uniformizer(3), unramified(2, 2))),
    ("F5: t^(1/2)", LaurentBase(5), (root_of_uniformizer(2),)),
    ("F5: unramified 4 via X^4 - 2", LaurentBase(5), (unramified(4, 2),)),
    ("F5: X^2 - 3t", LaurentBase(5), (PureStep(2, 3, 1),)),
    ("F5: X^3 - 2t^2", LaurentBase(5), (PureStep(3, 2, 2),)),
    ("F5: unramified 2 then t^(1/2)", LaurentBase(5), (unramified(2, 2), root_of_uniformizer(2))),
    ("F7: unramified 3 via X^3 - 3", LaurentBase(7), (unramified(3, 3),)),
    ("F7: X^2 - 3t", LaurentBase(7), (PureStep(2, 3, 1),)),
    ("F7: t^(1/6) twisted by 3", LaurentBase(7), (PureStep(6, 3, 1),)),
    ("F7: t^(1/3) then unramified 3", LaurentBase(7), (root_of_uniformizer(3), unramified(3, 3))),
    ("F7: unramified 2 then t^(1/2)", LaurentBase(7), (unramified(2, 3), root_of_uniformizer(2))),
)

PADIC_CATALOGUE = (
    ("Q5: unramified 2 via X^2 - 2", PadicBase(5, 10), (unramified(2, 2),)),
    ("Q5: 5^(1/3)", PadicBase(5, 10), (root_of_uniformizer(3),)),
    ("Q7: X^2 - 3*7 then unramified 3", PadicBase(7, 10), (PureStep(2, 3, 1), unramified(3, 3))),
    ("Q5: constant below precision", PadicBase(5, 3), (PureStep(2, 125 * 2, 0),)),
)


def run_catalogue(cases=CATALOGUE) -> list:
    return [(name, fundamental_equality_oracle(base, steps)) for name, base, steps in cases]


# ---------------------------------------------------------------- JSON case files


def _base_from_json(obj: dict) -> Base:
    kind = obj.get("kind")
    if kind == "laurent":
        return LaurentBase(int(obj["q"]))
    if kind == "padic":
        return PadicBase(int(obj["p"]), int(obj["precision"]))
    raise UnsupportedExtension(f"unsupported base kind {kind!r}")


def _step_from_json(obj: dict) -> PureStep:
    kind = obj.get("kind")
    if kind == "root_of_uniformizer":
        return root_of_uniformizer(int(obj["n"]))
    if kind == "unramified":
        return unramified(int(obj["m"]), int(obj["c"]))
    if kind == "pure":
        return PureStep(int(obj["n"]), int(obj.get("c", 1)), int(obj.get("k", 1)))
    raise UnsupportedExtension(f"unsupported extension kind {kind!r}")


def cases_from_json(text: str) -> list:
    """Parse a JSON list of ``{"name", "base", "steps"}`` case objects."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("an oracle case file holds a JSON list")
    out = []
    for i, obj in enumerate(data):
        name = obj.get("name", f"case {i + 1}")
        out.append((name, _base_from_json(obj["base"]), tuple(_step_from_json(s) for s in obj["steps"])))
    return out


def _step_to_json(step: PureStep) -> dict:
    return {"kind": "pure", "n": step.n, "c": step.c, "k": step.k}


def _base_to_json(base: Base) -> dict:
    if isinstance(base, LaurentBase):
        return {"kind": "laurent", "q": base.q}
    return {"kind": "padic", "p": base.p, "precision": base.precision}


def cases_to_json(cases) -> str:
    return json.dumps(
        [{"name": n, "base": _base_to_json(b), "steps": [_step_to_json(s) for s in st]} for n, b, st in cases],
        indent=2,
    )
