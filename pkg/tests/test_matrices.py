import json
import random
from fractions import Fraction

import pytest

from gksiegel.arith import factorize, fundamental_discriminant, ord_p, quadratic_class
from gksiegel.corpus import gen_corpus, random_unimodular
from gksiegel.errors import ValidationError
from gksiegel.matrices import (
    G_r,
    HalfIntegralMatrix as H,
    global_discriminant,
    local_invariants,
    minor_norm,
    validate,
)

HALF = H(((2, 1), (1, 2)))


def test_validate_accepts_half_integral():
    B = validate('{"n":2,"two_b":[[2,1],[1,2]]}')
    assert B.entries() == [[1, Fraction(1, 2)], [Fraction(1, 2), 1]]


@pytest.mark.parametrize(
    "content, msg",
    [
        ({"n": 2, "two_b": [[1, 0], [0, 2]]}, "not half-integral"),
        ({"n": 2, "two_b": [[2, 1], [0, 2]]}, "not symmetric"),
        ({"n": 2, "two_b": [[2, 2], [2, 2]]}, "degenerate"),
        ({"n": 3, "two_b": [[2, 0], [0, 2]]}, "declared n"),
        ({"n": 1, "two_b": [[2.5]]}, "integers"),
        ("{not json", "malformed"),
        ({"rows": []}, "two_b"),
    ],
)
def test_validate_rejects(content, msg):
    with pytest.raises(ValidationError, match=msg):
        validate(json.dumps(content) if isinstance(content, dict) else content)


def test_degenerate_allowed_on_request():
    assert validate({"two_b": [[2, 2], [2, 2]]}, allow_degenerate=True).det_two_b() == 0


def test_ord_and_quadratic_class():
    assert ord_p(0, 3) == float("inf")
    assert ord_p(Fraction(9, 2), 3) == 2
    assert quadratic_class(-4, 5) == (1, 0)
    assert quadratic_class(-3, 2) == (-1, 0)
    assert quadratic_class(-4, 2) == (0, 2)
    assert quadratic_class(8, 2) == (0, 3)
    assert quadratic_class(12, 3) == (0, 1)


def test_local_invariants_examples():
    inv = local_invariants(H.diag(1, 1), 5)
    assert (inv.xi, inv.eB) == (1, 0)
    inv = local_invariants(H.diag(1, 3), 3)
    assert (inv.xi, inv.eB) == (0, 0)
    assert local_invariants(H.diag(12), 2).eB == 2


def test_global_discriminant_examples():
    g = global_discriminant(H.diag(1, 1))
    assert (g.dB, g.fB) == (-4, 1)
    g = global_discriminant(H.diag(1, 4))
    assert (g.dB, g.fB) == (-4, 2)
    g = global_discriminant(HALF)
    assert (g.dB, g.fB) == (-3, 1)


def test_global_discriminant_rejects():
    with pytest.raises(ValidationError):
        global_discriminant(H.diag(1, 1, 1))
    with pytest.raises(ValidationError):
        global_discriminant(H.diag(1, -1))


def test_fundamental_discriminant():
    assert fundamental_discriminant(-16) == (-4, 2)
    assert fundamental_discriminant(-108) == (-3, 6)
    assert fundamental_discriminant(-8) == (-8, 1)
    with pytest.raises(ValidationError):
        fundamental_discriminant(-6)


def test_factorize():
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    assert factorize(-7) == ((7, 1),)


def test_minor_norm_examples():
    assert minor_norm(HALF, (0,), (0,)) == 1
    assert minor_norm(HALF, (0,), (1,)) == 1
    B = H.diag(1, 3)
    assert minor_norm(B, (0, 1), (0, 1)) == B.det_two_b()


def test_minor_norm_rejects_bad_indices():
    with pytest.raises(ValidationError):
        minor_norm(HALF, (1, 0), (0, 1))
    with pytest.raises(ValidationError):
        minor_norm(HALF, (0,), (0, 1))


def test_G_r_examples():
    assert G_r(H.diag(2, 2), 1) == 2
    assert G_r(HALF, 1) == 1
    assert ord_p(G_r(H.diag(1, 3, 9), 2), 3) == 1


def test_corpus_invariants():
    for n in (2, 4):
        for B in gen_corpus(3, 20, n):
            assert B.is_positive_definite()
            g = global_discriminant(B)
            assert g.dB * g.fB**2 == (-1) ** (n // 2) * B.det_two_b()
            assert ord_p(G_r(B, n), 2) == ord_p(B.det_two_b(), 2)
            for p in (3, 5, 7):
                if B.det_two_b() % p:
                    inv = local_invariants(B, p)
                    assert inv.xi in (1, -1) and inv.eB == 0
            for p in (2, 3):
                assert local_invariants(B, p).eB % 2 == 0


def test_minor_norms_integral_on_corpus():
    from gksiegel.matrices import all_minor_norms

    for B in gen_corpus(4, 10, 3):
        for r in (1, 2, 3):
            assert all(isinstance(v, int) for v in all_minor_norms(B, r))


def test_unimodular_transform_preserves_invariants():
    rng = random.Random(2)
    for B in gen_corpus(5, 10, 3):
        U = random_unimodular(rng, 3)
        C = B.transform(U)
        assert C.det_two_b() == B.det_two_b()
        for p in (2, 3):
            assert local_invariants(C, p) == local_invariants(B, p)
