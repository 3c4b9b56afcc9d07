import random

import pytest

from gksiegel.corpus import gen_corpus, random_unimodular
from gksiegel.errors import ValidationError
from gksiegel.gk import (
    CERTIFIED,
    EXACT,
    candidate_sequences,
    dr_enumerate,
    find_optimal_basis,
    gk_invariant,
    gr_at_p,
    jordan_odd,
    s_membership,
)
from gksiegel.matrices import HalfIntegralMatrix as H, local_invariants

HALF = H(((2, 1), (1, 2)))
D139 = H.diag(1, 3, 9)


def test_s_membership_examples():
    assert s_membership(H.diag(1, 3), 3, (0, 1))
    assert not s_membership(H.diag(1, 3), 3, (1, 1))
    assert s_membership(HALF, 2, (0, 0))
    assert s_membership(H(((2, 2), (2, 4))), 2, (0, 1))


def test_jordan_examples():
    assert jordan_odd(D139, 3).exponents == (0, 1, 2)
    assert jordan_odd(HALF, 3).exponents == (0, 1)
    assert jordan_odd(D139.scale(2), 3).exponents == (0, 1, 2)


def test_jordan_precision_guard():
    with pytest.raises(ValidationError):
        jordan_odd(H.diag(1, 27), 3, precision=2)


def test_jordan_rejects_two():
    with pytest.raises(ValidationError):
        jordan_odd(HALF, 2)


def test_gk_examples():
    g = gk_invariant(D139, 3)
    assert g.a == (0, 1, 2) and g.ledger == (0, 0, 3) and g.certificate == EXACT
    assert gk_invariant(HALF, 2).a == (0, 0)
    assert gk_invariant(H.diag(1, 1), 2).a == (0, 1)
    assert gk_invariant(H.diag(12), 2).a == (2,)


def test_gk_dyadic_search_certified():
    g = gk_invariant(H.diag(1, 2, 4), 2)
    assert g.certificate == CERTIFIED
    assert g.a == (0, 1, 4)
    assert (0, 2, 3) in g.refuted
    U = [list(r) for r in g.witness]
    assert s_membership(H.diag(1, 2, 4).transform(U), 2, g.a)


def test_candidates_respect_bounds():
    B = H.diag(1, 1, 1, 1)
    eB = local_invariants(B, 2).eB
    for c in candidate_sequences(B, 2):
        assert list(c) == sorted(c)
        assert c[0] == gr_at_p(B, 2, 1)
    assert candidate_sequences(B, 2) == sorted(candidate_sequences(B, 2), reverse=True)
    assert eB == 4  # D_B = 16 is a 2-adic square


def test_find_optimal_basis_refutes():
    # diag(1,1,1) does not admit (0,2,2): it would force e_3 = 4 > e_B = 2
    assert find_optimal_basis(H.diag(1, 1, 1), 2, (0, 2, 2)) is None


def test_gr_examples():
    assert gr_at_p(D139, 3, 1) == 0
    assert gr_at_p(D139, 3, 2) == 1


def test_dr_examples():
    assert dr_enumerate(D139, 3, 2) == 1
    assert dr_enumerate(H.diag(1, 2, 5), 3, 2) == 0
    # r = n: a single determinant
    assert dr_enumerate(H.diag(1, 3), 3, 2) == gr_at_p(H.diag(1, 3), 3, 2)
    assert dr_enumerate(H.diag(1, 1), 2, 2) == gr_at_p(H.diag(1, 1), 2, 2)


def test_dr_full_vs_primitive():
    B = H(((2, 1), (1, 4)))
    for p in (2, 3):
        for r in (1, 2):
            assert dr_enumerate(B, p, r, primitive=False) == dr_enumerate(B, p, r)


def test_shift_and_unit_scaling():
    for B in gen_corpus(8, 8, 3):
        for p in (3, 5):
            a = gk_invariant(B, p).a
            assert gk_invariant(B.scale(p), p).a == tuple(x + 1 for x in a)
            assert gk_invariant(B.scale(2), p).a == a
        a = gk_invariant(B, 2).a
        assert gk_invariant(B.scale(3), 2).a == a


def test_unimodular_invariance():
    rng = random.Random(12)
    for B in gen_corpus(9, 8, 3):
        C = B.transform(random_unimodular(rng, 3))
        for p in (2, 3):
            assert gk_invariant(C, p).a == gk_invariant(B, p).a


def test_identities_small_corpus():
    for n in (2, 3):
        for B in gen_corpus(10, 6, n):
            for p in (2, 3, 5):
                g = gk_invariant(B, p)
                assert g.ledger[-1] == local_invariants(B, p).eB
                for r in range(1, n):
                    gr = gr_at_p(B, p, r)
                    assert g.ledger[r - 1] <= gr
