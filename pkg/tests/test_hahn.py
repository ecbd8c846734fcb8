import json
import random
from fractions import Fraction
from math import comb

import pytest

from nipval.errors import ParseError, PreconditionError, UnsupportedExtension
from nipval.hahn import (
    CATALOGUE,
    PADIC_CATALOGUE,
    QQ,
    HahnSeries,
    LaurentBase,
    PadicBase,
    PureStep,
    coeff_field,
    fundamental_equality_oracle,
    gf,
    hensel_lift,
    invert_to,
    invert_trunc,
    parse_poly,
    parse_series,
    root_of_uniformizer,
    run_catalogue,
    unramified,
    val_res,
)
from nipval.hahn.oracle import cases_from_json, cases_to_json
from nipval.hahn.series import format_series
from nipval.oag import INFINITY, Q, Z, lex
from nipval.dsl import parse_valued_field
from nipval.valfield import structural_flags

FIELDS = [QQ, gf(5), gf(25), gf(4)]
GROUPS = [Z, Q, lex(Z, Z)]


def random_exponent(rng, G):
    coords = []
    for s in G.summands:
        if s.is_discrete:
            coords.append(Fraction(rng.randint(-3, 6)))
        else:
            coords.append(Fraction(rng.randint(-6, 12), rng.choice([1, 2, 3])))
    return G.element(tuple(coords))


def random_coefficient(rng, F):
    if F == QQ:
        return Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return F.element(rng.randrange(F.q))


def random_series(rng, G, F, terms=4):
    pairs = [(random_exponent(rng, G), random_coefficient(rng, F)) for _ in range(rng.randint(0, terms))]
    return HahnSeries(G, F, tuple(pairs))


def _pairs(F, n=200):
    rng = random.Random(1000 + FIELDS.index(F))
    for i in range(n):
        G = GROUPS[i % len(GROUPS)]
        yield random_series(rng, G, F), random_series(rng, G, F)


def vmin(a, b):
    if a is INFINITY:
        return b
    if b is INFINITY:
        return a
    return min(a, b)


def vadd(a, b):
    if a is INFINITY or b is INFINITY:
        return INFINITY
    return a + b


# ---------------------------------------------------------------- valuation laws


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_valuation_is_multiplicative(F):
    for x, y in _pairs(F):
        assert (x * y).valuation() == vadd(x.valuation(), y.valuation())


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_ultrametric_inequality(F):
    for x, y in _pairs(F):
        s = (x + y).valuation()
        m = vmin(x.valuation(), y.valuation())
        assert s is INFINITY or not s < m
        if x.valuation() != y.valuation():
            assert s == m


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_residue_map_is_a_ring_homomorphism(F):
    for x, y in _pairs(F):
        x, y = _integral(x), _integral(y)
        rx, ry = val_res(x).res, val_res(y).res
        assert val_res(x + y).res == rx + ry
        assert val_res(x * y).res == rx * ry


def _integral(x):
    """Drop the terms of negative exponent, leaving an element of the valuation ring."""
    return HahnSeries(x.group, x.field, tuple((g, c) for g, c in x.terms if g.sign() >= 0))


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_ring_axioms(F):
    rng = random.Random(1)
    for _ in range(60):
        G = rng.choice(GROUPS)
        x, y, z = (random_series(rng, G, F) for _ in range(3))
        assert x * (y + z) == x * y + x * z
        assert (x * y) * z == x * (y * z)
        assert x - x == HahnSeries.zero(G, F)


def test_val_res_conventions():
    x = parse_series("3 + t", Z)
    assert val_res(x) == (Z.zero(), Fraction(3))
    assert val_res(parse_series("t^(-1) + 1", Z)).res == 0
    assert val_res(HahnSeries.zero(Z)).v is INFINITY


# ---------------------------------------------------------------- inversion


def test_invert_trunc_geometric_series():
    y = invert_trunc(parse_series("1 - t", Z), 3)
    assert y == parse_series("1 + t + t^2 + t^3", Z)


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_invert_reaches_the_bound(F):
    rng = random.Random(5)
    bound = Q.element(4)
    for _ in range(40):
        x = random_series(rng, Q, F)
        if x.is_zero():
            continue
        err = x * invert_to(x, bound) - 1
        assert err.is_zero() or bound < err.valuation()


def test_infinitesimal_unit_is_rejected():
    G = lex(Z, Z)
    x = HahnSeries(G, QQ, ((G.zero(), Fraction(1)), (G.element(0, 1), Fraction(1))))
    with pytest.raises(PreconditionError):
        invert_to(x, G.element(1, 0))


def test_dense_group_needs_a_gauge():
    with pytest.raises(PreconditionError):
        invert_trunc(parse_series("1 - t", Q), 3)
    y = invert_trunc(parse_series("1 - t", Q), 3, Q.element(1))
    assert y == parse_series("1 + t + t^2 + t^3", Q)


def test_fractional_exponents():
    F5 = gf(5)
    r = parse_series("t^(1/2)", Q, F5)
    assert r * r == parse_series("t", Q, F5)


# ---------------------------------------------------------------- Hensel lifting


def binomial_half(k: int) -> Fraction:
    """The coefficient of t^k in the binomial series of (1+t)^(1/2)."""
    out = Fraction(1)
    for j in range(k):
        out *= (Fraction(1, 2) - j) / (j + 1)
    return out


def test_binomial_oracle_is_right():
    assert [binomial_half(k) for k in range(4)] == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]
    # cross-check against the central binomial closed form
    for k in range(1, 12):
        assert binomial_half(k) == (-1) ** (k + 1) * Fraction(comb(2 * k, k), (2 * k - 1) * 4**k)


@pytest.mark.parametrize("field_name", ["Q", "F5"])
def test_square_root_lift_matches_binomial_series(field_name):
    F = coeff_field(field_name)
    f = parse_poly("X^2 - (1 + t)", Z, F)
    result = hensel_lift(f, 1, 20)
    for k in range(21):
        assert result.root.coefficient(Z.element(k)) == F.coerce(binomial_half(k)), k
    assert result.root.support()[-1] <= Z.element(20)
    residual = f(result.root)
    assert residual.is_zero() or Z.element(20) < residual.valuation()


@pytest.mark.parametrize("field_name", ["Q", "F5", "F7"])
def test_newton_defect_doubles(field_name):
    F = coeff_field(field_name)
    result = hensel_lift(parse_poly("X^2 - (1 + t)", Z, F), 1, 20)
    assert result.doubling_holds()
    ds = result.defects
    for before, after in zip(ds, ds[1:]):
        assert after is INFINITY or not after < before * 2
    assert len(ds) >= 3


def test_lift_of_a_cubic():
    F = coeff_field("F7")
    f = parse_poly("X^3 - X - t", Z, F)
    result = hensel_lift(f, 0, 15)
    r = f(result.root)
    assert r.is_zero() or Z.element(15) < r.valuation()
    assert result.doubling_holds()


def test_lift_preconditions():
    f = parse_poly("X^2 - (1 + t)", Z)
    with pytest.raises(PreconditionError, match="not a residue root"):
        hensel_lift(f, 2, 5)
    with pytest.raises(PreconditionError, match="simple"):
        hensel_lift(parse_poly("X^2 - t", Z), 0, 5)
    with pytest.raises(PreconditionError, match="valuation ring"):
        hensel_lift(parse_poly("X^2 - t^(-1)", Z), 1, 5)


# ---------------------------------------------------------------- parsing and printing


def test_series_text_round_trip():
    F5 = gf(5)
    for text in ("1 + 3*t + 3*t^2 + t^3", "t^(-1) - 2", "2*t^(1/2)"):
        G = Q if "/" in text else Z
        x = parse_series(text, G, F5)
        assert parse_series(format_series(x), G, F5) == x


def test_series_parse_errors():
    with pytest.raises(ParseError):
        parse_series("1 +", Z)
    with pytest.raises(ParseError):
        parse_series("1/(1+t)", Z)


def test_finite_field_arithmetic():
    F = gf(25)
    nonzero = [x for x in F.elements() if x != F.zero]
    assert len(nonzero) == 24
    for x in nonzero:
        assert x * x.inverse() == F.one
        assert x**24 == F.one
    assert sum((F.one for _ in range(5)), F.zero) == F.zero


# ---------------------------------------------------------------- fundamental equality


def test_catalogue_all_equal():
    results = run_catalogue()
    assert len(results) >= 12
    for name, r in results:
        assert r.status == "ok" and r.equal is True, name
        assert r.lhs == r.rhs


def test_catalogue_agrees_with_symbolic_flag():
    for q in (5, 7):
        D = parse_valued_field(f"hahn(triv(F({q})),Z)")
        assert structural_flags(D).defectless is True
    assert structural_flags(parse_valued_field("Qp(5)")).defectless is True


def test_step_invariants():
    r = fundamental_equality_oracle(LaurentBase(7), (PureStep(6, 3, 1),))
    step = r.steps[0]
    assert (step.e, step.f) == (6, 1)
    r = fundamental_equality_oracle(LaurentBase(5), (unramified(4, 2),))
    assert r.terms == ((1, 4),) and r.steps[0].residue_size == 625
    r = fundamental_equality_oracle(LaurentBase(5), (PureStep(3, 2, 2),))
    assert r.terms == ((3, 1),)


def test_padic_catalogue():
    results = dict(run_catalogue(PADIC_CATALOGUE))
    statuses = [r.status for r in results.values()]
    assert statuses.count("ok") == 3 and statuses.count("inconclusive") == 1
    assert all(r.equal for r in results.values() if r.status == "ok")
    low = results["Q5: constant below precision"]
    assert "inconclusive at this precision" in low.detail and low.equal is None


def test_unsupported_extensions():
    with pytest.raises(UnsupportedExtension, match="wild"):
        fundamental_equality_oracle(LaurentBase(5), (PureStep(5),))
    with pytest.raises(UnsupportedExtension, match="reducible"):
        fundamental_equality_oracle(LaurentBase(5), (unramified(2, 4),))
    with pytest.raises(UnsupportedExtension, match="reducible"):
        fundamental_equality_oracle(LaurentBase(5), (root_of_uniformizer(2), PureStep(2, 1, 2)))
    with pytest.raises(UnsupportedExtension):
        fundamental_equality_oracle(PadicBase(5, 4), (PureStep(2, 10, 0),))
    with pytest.raises(UnsupportedExtension):
        fundamental_equality_oracle(LaurentBase(5), ("artin-schreier",))
    with pytest.raises(UnsupportedExtension):
        cases_from_json(json.dumps([{"base": {"kind": "puiseux"}, "steps": []}]))


def test_case_file_round_trip():
    text = cases_to_json(CATALOGUE)
    again = cases_from_json(text)
    assert [(n, b, s) for n, b, s in again] == [(n, b, tuple(s)) for n, b, s in CATALOGUE]
