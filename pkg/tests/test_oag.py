from fractions import Fraction
from itertools import product

import pytest

from nipval.errors import MembershipError, PreconditionError
from nipval.oag import (
    DISCRETE,
    RATIONALS,
    TRIVIAL,
    GroupElement,
    OAGDesc,
    Q,
    Z,
    Zp,
    dense,
    dense_summand,
    element_ops,
    gamma_cuts,
    has_min_positive,
    interval_finite,
    is_p_divisible,
    is_quotient_discrete,
    lex,
    max_p_divisible_convex,
    min_positive_image,
    quotient_and_subgroup,
    rel_div_hull,
    rough_p_divisible,
)

# ---------------------------------------------------------------- brute-force enumeration


def _coordinate_values(summand, radius: int, max_den: int) -> list:
    """Rationals of the summand with |numerator| <= radius*den and small denominators."""
    if summand.is_discrete:
        dens = [1]
    elif summand.primes is None:
        dens = list(range(1, max_den + 1))
    else:
        # localized summands need prime-power denominators to show any density
        dens = [d for d in range(1, 6 * max_den + 1) if _only_primes(d, summand.primes)]
    vals = set()
    for d in dens:
        for n in range(-radius * d, radius * d + 1):
            vals.add(Fraction(n, d))
    return sorted(vals)


def _only_primes(d: int, primes) -> bool:
    for p in primes:
        while d % p == 0:
            d //= p
    return d == 1


def box(G: OAGDesc, radius: int, max_den: int) -> list:
    axes = [_coordinate_values(s, radius, max_den) for s in G.summands]
    return [GroupElement(c) for c in product(*axes)]


def interval(G, lo, hi, radius, max_den) -> list:
    return [x for x in box(G, radius, max_den) if not x < lo and not hi < x]


def _radius(gamma) -> int:
    return int(max(abs(c) for c in gamma.coords)) + 2


def brute_interval_finite(G, gamma) -> bool:
    r = _radius(gamma)
    small = len(interval(G, G.zero(), gamma, r, 4))
    large = len(interval(G, G.zero(), gamma, 2 * r, 8))
    return small == large


def brute_rough(G, gamma, p) -> bool:
    for x in interval(G, -gamma, gamma, _radius(gamma), 4 if G.rank > 1 else 12):
        if not G.contains(GroupElement(tuple(c / p for c in x.coords))):
            return False
    return True


DISCRETE_TOWERS = [
    (Z, [(1,), (2,), (5,)]),
    (lex(Z, Z), [(0, 1), (0, 3), (1, 0), (1, -2), (2, 1)]),
    (lex(Z, Z, Z), [(0, 0, 1), (0, 1, -1), (1, 0, 0), (0, 2, 0)]),
]

MIXED_TOWERS = [
    (Q, [(1,), (Fraction(1, 2),)]),
    (Zp(5), [(1,), (Fraction(1, 5),)]),
    (dense(2, 3), [(1,), (Fraction(1, 6),)]),
    (lex(Q, Z), [(0, 1), (1, 0), (Fraction(1, 2), -1)]),
    (lex(Z, Q), [(0, 1), (1, 0), (2, Fraction(-1, 3))]),
    (lex(Zp(5), Z), [(0, 2), (Fraction(1, 5), 0)]),
    (lex(Z, Zp(5)), [(0, Fraction(1, 5)), (1, 1)]),
]

ALL_TOWERS = [(G, g) for G, gs in DISCRETE_TOWERS + MIXED_TOWERS for g in gs]


@pytest.mark.parametrize("G,coords", ALL_TOWERS, ids=lambda v: str(v))
def test_interval_finite_matches_enumeration(G, coords):
    gamma = G.element(coords)
    assert interval_finite(G, gamma) == brute_interval_finite(G, gamma)


@pytest.mark.parametrize("G,coords", ALL_TOWERS, ids=lambda v: str(v))
@pytest.mark.parametrize("p", [2, 3, 5])
def test_rough_p_divisible_matches_enumeration(G, coords, p):
    gamma = G.element(coords)
    assert rough_p_divisible(G, gamma, p) == brute_rough(G, gamma, p)


RATIONALS_50 = sorted({Fraction(a, b) for a in range(-50, 51) for b in range(1, 51)})


@pytest.mark.parametrize("G,coords", ALL_TOWERS, ids=lambda v: str(v))
def test_rel_div_hull_matches_membership(G, coords):
    gamma = G.element(coords)
    hull = rel_div_hull(G, gamma)
    for r in RATIONALS_50:
        assert hull.contains(r) == G.contains(gamma * r), (str(hull), r)


def test_interval_sizes_stay_within_budget():
    for G, gs in DISCRETE_TOWERS:
        for coords in gs:
            assert len(box(G, 8, 8)) <= 10**4


# ---------------------------------------------------------------- construction and membership


def test_summand_kinds_print():
    assert str(Z) == "Z" and str(Q) == "Q" and str(Zp(5)) == "Z[1/5]"
    assert str(dense(3, 2)) == "dense{2,3}"
    assert str(lex(Q, Z)) == "lex(Q,Z)"
    assert TRIVIAL.is_trivial and TRIVIAL.rank == 0


def test_invalid_summands_rejected():
    with pytest.raises(ValueError):
        dense_summand([4])
    with pytest.raises(ValueError):
        dense_summand([])


def test_element_membership():
    G = lex(Z, Zp(5))
    assert G.element(1, Fraction(3, 25)).coords == (1, Fraction(3, 25))
    with pytest.raises(MembershipError):
        G.element(Fraction(1, 2), 0)
    with pytest.raises(MembershipError):
        G.element(0, Fraction(1, 3))
    with pytest.raises(ValueError):
        G.element(1)


def test_lex_order_and_ops():
    G = lex(Z, Q)
    x, y = G.element(1, -100), G.element(0, 1000)
    ops = element_ops(G, x, y)
    assert ops.cmp == 1 and ops.member
    assert ops.sum == G.element(1, 900)
    assert x.leading_index() == 0 and y.leading_index() == 1
    assert (-x).sign() == -1 and G.zero().is_zero()


def test_divisibility_and_min_positive():
    assert is_p_divisible(Q, 7) and not is_p_divisible(Z, 2)
    assert is_p_divisible(Zp(5), 5) and not is_p_divisible(Zp(5), 3)
    assert has_min_positive(lex(Q, Z)) and not has_min_positive(lex(Z, Q))
    with pytest.raises(PreconditionError):
        has_min_positive(TRIVIAL)


def test_gamma_cuts_name_the_convex_subgroups():
    G = lex(Q, Z, Q)
    cuts = gamma_cuts(G, G.element(0, 2, 5))
    assert cuts.plus.index == 1 and cuts.minus.index == 2
    assert quotient_and_subgroup(G, cuts.plus).subgroup == lex(Z, Q)
    assert quotient_and_subgroup(G, cuts.minus).subgroup == Q
    assert is_quotient_discrete(G, cuts.plus, cuts.minus)
    with pytest.raises(PreconditionError):
        gamma_cuts(G, G.zero())


def test_max_p_divisible_convex():
    G = lex(Z, Q, Zp(5))
    assert max_p_divisible_convex(G, 5).index == 1
    assert max_p_divisible_convex(G, 3).index == 3


def test_min_positive_image():
    G = lex(Z, Q)
    assert min_positive_image(G, G.element(1, -7))
    assert not min_positive_image(G, G.element(2, 0))
    assert not min_positive_image(G, G.element(0, 1))


def test_rel_div_hull_examples():
    assert str(rel_div_hull(Z, Z.element(1))) == "{default=0}"
    assert rel_div_hull(Q, Q.element(1)).is_divisible_by(7)
    hull = rel_div_hull(Zp(5), Zp(5).element(1))
    assert hull.is_divisible_by(5) and not hull.is_divisible_by(2)
    # gamma = 2 in Z: the hull is (1/2)Z
    assert rel_div_hull(Z, Z.element(2)).contains(Fraction(1, 2))
    assert not rel_div_hull(Z, Z.element(2)).contains(Fraction(1, 4))


def test_rough_and_interval_preconditions():
    with pytest.raises(PreconditionError):
        rough_p_divisible(Z, Z.element(-1), 5)
    with pytest.raises(PreconditionError):
        interval_finite(Z, Z.element(-1))
    assert interval_finite(Z, Z.zero())


def test_archimedean_summand_constants():
    assert DISCRETE.is_discrete and not RATIONALS.is_discrete
    assert RATIONALS.divisible_by(11) and not DISCRETE.divisible_by(2)
