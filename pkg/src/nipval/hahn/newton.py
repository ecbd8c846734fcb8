"""Hensel lifting of simple residue roots by Newton iteration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import PreconditionError
from ..oag import INFINITY, GroupElement
from .parse import Poly
from .series import HahnSeries, _gauge, invert_to, val_res


@dataclass(frozen=True)
class NewtonStep:
    iterate: HahnSeries
    defect: object  # v(f(x)) as a GroupElement or INFINITY


@dataclass(frozen=True)
class LiftResult:
    root: HahnSeries
    bound: GroupElement
    steps: tuple  # NewtonStep per iterate, starting with the constant a0

    @property
    def defects(self) -> tuple:
        return tuple(s.defect for s in self.steps)

    def doubling_holds(self) -> bool:
        """Each defect is at least twice the previous one."""
        ds = self.defects
        for before, after in zip(ds, ds[1:]):
            if before is INFINITY:
                return False
            if after is not INFINITY and after < before * 2:
                return False
        return True


def _residue_poly_value(f: Poly, a0) -> tuple:
    fa = f(HahnSeries.const(a0, f.group, f.field))
    dfa = f.derivative()(HahnSeries.const(a0, f.group, f.field))
    return val_res(fa).res, val_res(dfa).res


def hensel_lift(f: Poly, a0, N: int, gauge: Optional[GroupElement] = None, max_steps: int = 64) -> LiftResult:
    """Lift the simple residue root ``a0`` of ``f`` to ``x`` with ``v(f(x)) > N*g``.

    One Newton step turns a defect ``d`` into at least ``2d``; iterates are
    truncated above ``max(2d, N*g)``, which keeps that guarantee.
    """
    g = _gauge(f.group, gauge)
    for c in f.coeffs:
        if not c.is_zero() and c.valuation().sign() < 0:
            raise PreconditionError(f"coefficient {c} is not in the valuation ring")
    a0 = f.field.coerce(a0)
    r, dr = _residue_poly_value(f, a0)
    if r != 0:
        raise PreconditionError(f"{a0} is not a residue root (residue of f(a0) is {r})")
    if dr == 0:
        raise PreconditionError(f"{a0} is not a simple residue root (residue of f'(a0) vanishes)")
    bound = g * N
    df = f.derivative()
    x = HahnSeries.const(a0, f.group, f.field)
    fx = f(x)
    steps = [NewtonStep(x, fx.valuation())]
    for _ in range(max_steps):
        d = fx.valuation()
        if d is INFINITY or bound < d:
            # terms above the bound do not affect v(f(x)) > bound
            return LiftResult(x.truncate(bound), bound, tuple(steps))
        target = max(d * 2, bound)
        if bound.sign() > 0 and d.leading_index() > bound.leading_index():
            raise PreconditionError(f"defect {d} is infinitesimal relative to {bound}; Newton iteration cannot reach it")
        y = invert_to(df(x), d)
        x = (x - fx * y).truncate(target)
        fx = f(x)
        steps.append(NewtonStep(x, fx.valuation()))
    raise PreconditionError(f"no convergence within {max_steps} Newton steps")
