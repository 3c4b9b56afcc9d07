import random
from fractions import Fraction

import pytest

from gksiegel.algebra import (
    BivariateLaurent as BL,
    HalfExpLaurent,
    MultiQuad,
    QuadExt,
    laurent_arith,
    multiquad_mul,
    series_expand_quotient,
    squarefree_part,
    substitute,
)


def X(doubled, y=0, c=1):
    return BL.monomial(doubled, y, c)


def rand_bl(rng, terms=4):
    out = BL()
    for _ in range(terms):
        out = out + X(rng.randint(-4, 4), rng.randint(-4, 4), Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
    return out


def test_half_exponents_multiply():
    assert laurent_arith("mul", X(1), X(1)) == X(2)


def test_additive_identity():
    P = X(3, 1, 2) + X(-1)
    assert laurent_arith("add", P, BL()) == P


def test_binomial_square():
    s = X(-1) + X(1)
    assert s * s == X(-2) + BL.constant(2) + X(2)


def test_neg_and_scale():
    P = X(2, 1, 3)
    assert laurent_arith("neg", P) == X(2, 1, -3)
    assert laurent_arith("scale", P, Fraction(1, 3)) == X(2, 1)


def test_substitutions():
    assert substitute(X(1), "X->X^-1") == X(-1)
    assert substitute(X(2), "X->YX") == X(2, 2)
    # Y X^-1 under X -> Y X^-1 is Y (Y X^-1)^-1 = X
    assert substitute(X(-2, 2), "X->YX^-1") == X(2)


def test_substitute_rejects_unknown_rule():
    with pytest.raises(Exception):
        substitute(X(1), "X->2X")


def test_geometric_series():
    one = BL.constant(1)
    assert series_expand_quotient(one, one - X(2), 3) == one + X(2) + X(4) + X(6)


def test_series_with_zero_eps():
    one = BL.constant(1)
    assert series_expand_quotient(one, one - X(2, 0, 0), 5) == one


def test_exact_division():
    one = BL.constant(1)
    assert series_expand_quotient(one - X(4), one - X(2), 5) == one + X(2)


def test_series_needs_invertible_lead():
    with pytest.raises(ZeroDivisionError):
        series_expand_quotient(BL.constant(1), BL.monomial(0, 0) + BL.monomial(0, 2), 3)


def test_ring_axioms_random():
    rng = random.Random(11)
    for _ in range(60):
        a, b, c = rand_bl(rng), rand_bl(rng), rand_bl(rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == BL()


def test_series_inverts_product():
    rng = random.Random(5)
    for _ in range(30):
        P = BL()
        for _ in range(3):
            P = P + X(2 * rng.randint(0, 4), rng.randint(-2, 2), rng.randint(-3, 3))
        Q = BL.constant(1) + X(2, rng.randint(-2, 2), rng.randint(-2, 2)) + X(4, 0, rng.randint(-2, 2))
        assert series_expand_quotient(P * Q, Q, 8) == P.truncate(16)


def test_canonical_text():
    P = X(1) + X(0, -1, 2) + X(-2, 3, Fraction(-1, 2))
    assert P.to_text() == "-1/2*Y^(3/2)*X^(-1) + 2*Y^(-1/2) + X^(1/2)"


def test_half_exp_laurent_basics():
    h = HalfExpLaurent({1: 2, -2: 3, 0: 0})
    assert h.terms == {-2: Fraction(3), 1: Fraction(2)}
    assert h.min_exp() == -2 and h.max_exp() == 1
    assert h.reflect().terms == {2: 3, -1: 2}


def test_multiquad_examples():
    r2 = MultiQuad({2: 1})
    assert multiquad_mul(r2, r2) == MultiQuad({1: 2})
    assert multiquad_mul(r2, MultiQuad({3: 1})) == MultiQuad({6: 1})
    assert multiquad_mul(MultiQuad({1: 1, 2: 1}), MultiQuad({1: 1, 2: -1})) == MultiQuad({1: -1})


def test_multiquad_properties():
    rng = random.Random(3)
    keys = [1, 2, 3, 5, 6, 10, 15, 30]

    def r():
        return MultiQuad({rng.choice(keys): rng.randint(-4, 4) for _ in range(3)})

    for _ in range(50):
        a, b, c = r(), r(), r()
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert all(squarefree_part(k)[0] == k for k in (a * b).support())


def test_multiquad_rejects_nonsquarefree_key():
    with pytest.raises(ValueError):
        MultiQuad({4: 1})


def test_quadext_arithmetic_and_sign():
    s3 = QuadExt.sqrt(3)
    assert s3 * s3 == 3
    x = QuadExt(3, 1, Fraction(4, 3))
    assert x == 1 + Fraction(4, 3) * s3
    assert (x * x.inverse()) == 1
    assert QuadExt(2, 3, -2).sign() == 1  # 3 > 2 sqrt 2
    assert QuadExt(2, 2, -2).sign() == -1
    assert abs(QuadExt(5, -1, 0)) == 1
    assert QuadExt.sqrt_power(2, -17) == QuadExt(2, 0, Fraction(1, 512))


def test_quadext_rejects_bad_radicand():
    with pytest.raises(ValueError):
        QuadExt(12, 1, 1)
    with pytest.raises(ValueError):
        QuadExt.sqrt(2) + QuadExt.sqrt(3)
