import random
from fractions import Fraction

import pytest

from gksiegel.algebra import BivariateLaurent as BL, QuadExt
from gksiegel.egk import (
    NEGKError,
    bound_check,
    chebyshev_v,
    ei_ledger,
    f_poly,
    f_poly_series,
    functional_eq_defect,
    random_negk,
    specialize,
    validate_negk,
)
from gksiegel.errors import ValidationError


def G_of(a, eps):
    return f_poly(validate_negk(a, eps)).to_bivariate()


def test_valid_single():
    assert validate_negk((0,), (1,)).n == 1


@pytest.mark.parametrize(
    "a, eps, cond",
    [
        ((1, 0), (1, 1), "N1"),
        ((1, 1), (1, 0), "N2"),
        ((0, 1), (1, 1), "N2"),
        ((0, 1, 1), (1, 0, 0), "N3"),
        ((0,), (-1,), "N4"),
        ((0, 0, 0), (1, 1, -1), "N5"),
    ],
)
def test_negk_conditions(a, eps, cond):
    with pytest.raises(NEGKError) as exc:
        validate_negk(a, eps)
    assert exc.value.condition == cond


def test_negk_malformed():
    with pytest.raises(ValidationError):
        validate_negk((0, 1), (1,))
    with pytest.raises(ValidationError):
        validate_negk((0,), (2,))


def test_ledger_examples():
    assert ei_ledger((0, 1, 2)) == (0, 0, 3)
    assert ei_ledger((1, 1)) == (1, 2)
    assert ei_ledger((0, 0)) == (0, 0)


def test_f_poly_examples():
    one = BL.constant(1)
    assert G_of((2,), (1,)) == one + BL.monomial(2) + BL.monomial(4)
    assert G_of((0, 0), (1, 1)) == one
    assert G_of((0, 1), (1, 0)) == one
    F = f_poly(validate_negk((2,), (1,))).F()
    assert F == BL.monomial(-2) + one + BL.monomial(2)


def test_one_dimensional_closed_form():
    for a in range(7):
        G = G_of((a,), (1,))
        assert G == sum((BL.monomial(2 * i) for i in range(a + 1)), BL())


def test_series_route_examples():
    for a, eps in [((2,), (1,)), ((1, 1), (1, 1)), ((0, 0, 1), (1, -1, -1)), ((1, 2, 2, 3), (1, 0, 1, 1))]:
        H = validate_negk(a, eps)
        assert f_poly(H) == f_poly_series(H)


def test_series_route_random():
    rng = random.Random(21)
    for _ in range(40):
        H = random_negk(rng, rng.randint(1, 5), 4)
        assert f_poly(H).to_bivariate() == f_poly_series(H).to_bivariate(), str(H)


def test_functional_equation_examples():
    assert functional_eq_defect(validate_negk((2,), (1,))).is_zero()
    H = validate_negk((0, 0, 1), (1, -1, -1))
    assert H.zeta == -1
    assert functional_eq_defect(H).is_zero()


def test_functional_equation_random():
    rng = random.Random(8)
    for _ in range(60):
        assert functional_eq_defect(random_negk(rng, rng.randint(1, 6), 5)).is_zero()


def test_specialize_examples():
    G = f_poly(validate_negk((0, 0), (1, 1)))
    assert specialize(G, 3, t=Fraction(5, 7)) == 1
    G = f_poly(validate_negk((2,), (1,)))
    assert specialize(G, 5, x=1) == 3
    assert specialize(G, 3, x=QuadExt.sqrt(3)) == QuadExt(3, 1, Fraction(4, 3))


def test_specialize_t_route_matches_x_route():
    rng = random.Random(4)
    for _ in range(20):
        H = random_negk(rng, 2 * rng.randint(1, 2), 4)
        G = f_poly(H)
        x = Fraction(rng.randint(1, 5), rng.randint(1, 5))
        assert specialize(G, 3, t=x + 1 / x) == specialize(G, 3, x=x)


def test_specialize_rejects_odd_length_t_route():
    with pytest.raises(ValidationError):
        specialize(f_poly(validate_negk((2,), (1,))), 3, t=2)


def test_chebyshev():
    # X^k + X^-k at X = 2
    for k in range(6):
        assert chebyshev_v(k, Fraction(5, 2)) == 2**k + Fraction(1, 2**k)


def test_bound_check_examples():
    rep = bound_check(validate_negk((2,), (1,)), 2)
    assert rep.ok and rep.max_coeff_ratio == 1
    rep = bound_check(validate_negk((0, 0), (1, 1)), 3, Fraction(1, 2))
    assert rep.ok


def test_bound_check_rejects_bad_r0():
    with pytest.raises(ValidationError):
        bound_check(validate_negk((2,), (1,)), 2, Fraction(1, 3))


def test_bound_check_random_small():
    rng = random.Random(9)
    for _ in range(15):
        H = random_negk(rng, rng.randint(1, 4), 3)
        for q in (2, 3):
            assert bound_check(H, q, Fraction(1, 2)).ok
