from math import comb

import pytest

from isotypic.characters import (
    LaurentPoly,
    dim,
    greedy_decompose,
    laurent_exact_div,
    schur_laurent_on_so_torus,
    schur_poly,
    schur_product_decompose,
    so_character,
)
from isotypic.errors import (
    DivisionNotExact,
    NegativeMultiplicity,
    OddRankForSp,
    RankConstraint,
    RankTooLarge,
    SignatureTooLong,
)
from isotypic.signatures import GroupFamily, iter_partitions

from oracles import count_ssyt


def harmonic_dim(k, r):
    a = comb(k + r - 1, r)
    b = comb(k + r - 3, r - 2) if r >= 2 else 0
    return a - b


def test_laurent_arithmetic():
    x = LaurentPoly.monomial(1, (1,))
    xinv = LaurentPoly.monomial(1, (-1,))
    assert (x + xinv) * (x + xinv) == (
        LaurentPoly.monomial(1, (2,))
        + LaurentPoly.constant(1, 2)
        + LaurentPoly.monomial(1, (-2,))
    )
    assert (x - x).is_zero()
    assert (3 * x).eval_at_ones() == 3
    assert x.invert_variable(0) == xinv


def test_laurent_exact_division():
    x = LaurentPoly.monomial(1, (1,))
    one = LaurentPoly.constant(1, 1)
    num = LaurentPoly.monomial(1, (3,)) - LaurentPoly.monomial(1, (-3,))
    den = x - LaurentPoly.monomial(1, (-1,))
    expected = LaurentPoly.monomial(1, (2,)) + one + LaurentPoly.monomial(1, (-2,))
    assert laurent_exact_div(num, den) == expected
    with pytest.raises(DivisionNotExact):
        laurent_exact_div(x + one, den)


def test_dim_examples():
    assert dim(GroupFamily("u", 2), (8,)) == 9
    assert dim(GroupFamily("so", 3), (2,)) == 5
    for family, rank in (("u", 3), ("so", 5), ("sp", 4)):
        assert dim(GroupFamily(family, rank), ()) == 1


def test_dim_classical_values():
    assert dim(GroupFamily("u", 3), (1,)) == 3
    assert dim(GroupFamily("u", 3), (1, 1, 1)) == 1
    assert dim(GroupFamily("so", 5), (1,)) == 5
    assert dim(GroupFamily("so", 5), (1, 1)) == 10
    assert dim(GroupFamily("so", 6), (1,)) == 6
    assert dim(GroupFamily("sp", 4), (1,)) == 4
    assert dim(GroupFamily("sp", 4), (1, 1)) == 5
    assert dim(GroupFamily("sp", 6), (1,)) == 6


def test_dim_gl_matches_tableau_count():
    for lam in [(2,), (2, 1), (3, 1), (2, 2, 1), (4,)]:
        for k in range(len(lam), 5):
            assert dim(GroupFamily("u", k), lam) == count_ssyt(lam, k)
            assert schur_poly(lam, k).eval_at_ones() == count_ssyt(lam, k)


def test_dim_guards():
    with pytest.raises(RankConstraint):
        dim(GroupFamily("u", 2), (1, 1, 1))
    with pytest.raises(RankConstraint):
        dim(GroupFamily("so", 4), (1, 1, 1))
    with pytest.raises(OddRankForSp):
        dim(GroupFamily("sp", 5), (1,))


def test_schur_poly_small():
    s = schur_poly((1,), 2)
    assert s.terms == {(1, 0): 1, (0, 1): 1}
    assert schur_poly((2, 1), 2).eval_at_ones() == 2
    assert schur_poly((1, 1, 1), 2).is_zero()


def test_schur_torus_examples():
    chi = schur_laurent_on_so_torus((2,), 3)
    assert chi.terms == {(2,): 1, (1,): 1, (0,): 2, (-1,): 1, (-2,): 1}
    assert schur_laurent_on_so_torus((), 5).terms == {(0, 0): 1}
    assert schur_laurent_on_so_torus((1,), 2).terms == {(1,): 1, (-1,): 1}
    with pytest.raises(RankTooLarge):
        schur_laurent_on_so_torus((1,), 8)


def test_so_character_examples():
    assert so_character((1,), 3).terms == {(1,): 1, (0,): 1, (-1,): 1}
    assert so_character((), 6).terms == {(0, 0, 0): 1}
    assert so_character((2,), 3).terms == {
        (2,): 1, (1,): 1, (0,): 1, (-1,): 1, (-2,): 1,
    }


def test_so_character_guards():
    with pytest.raises(SignatureTooLong):
        so_character((1, 1), 4)
    with pytest.raises(SignatureTooLong):
        so_character((1, 1, 1), 6)
    with pytest.raises(RankTooLarge):
        so_character((1,), 9)


def test_so_character_dims_at_ones():
    for k in range(3, 8):
        max_len = (k - 1) // 2
        for w in range(6):
            for mu in iter_partitions(w, max_length=max_len):
                assert so_character(mu, k).eval_at_ones() == dim(
                    GroupFamily("so", k), mu
                ), (mu, k)


def test_so_character_weyl_invariance():
    # Odd rank: single sign changes belong to the Weyl group.
    chi = so_character((2, 1), 5)
    assert chi.invert_variable(0) == chi
    assert chi.invert_variable(1) == chi
    # Even rank: pairs of sign changes do.
    chi = so_character((2, 1), 6)
    assert chi.invert_variable(0).invert_variable(1) == chi
    assert chi.invert_variable(0).invert_variable(2) == chi


def test_greedy_decompose_examples():
    dec = greedy_decompose(
        schur_laurent_on_so_torus((2,), 3), GroupFamily("so", 3)
    )
    assert dec.terms == {(2,): 1, (): 1}
    dec = greedy_decompose(LaurentPoly.constant(2, 1), GroupFamily("so", 5))
    assert dec.terms == {(): 1}
    chi = so_character((1,), 3) + 2 * so_character((), 3)
    assert greedy_decompose(chi, GroupFamily("so", 3)).terms == {(1,): 1, (): 2}


def test_greedy_decompose_round_trip():
    for k in (3, 5, 6, 7):
        for w in range(5):
            for mu in iter_partitions(w, max_length=(k - 1) // 2):
                dec = greedy_decompose(so_character(mu, k), GroupFamily("so", k))
                assert dec.terms == {mu: 1}


def test_greedy_decompose_rejects_non_characters():
    chi = schur_laurent_on_so_torus((2,), 3) - 2 * so_character((), 3)
    with pytest.raises(NegativeMultiplicity):
        greedy_decompose(chi, GroupFamily("so", 3))


def test_schur_product_examples():
    assert schur_product_decompose((1,), (1,), 2).terms == {(2,): 1, (1, 1): 1}
    assert schur_product_decompose((2, 1), (), 3).terms == {(2, 1): 1}
    assert schur_product_decompose((2,), (2,), 2).terms == {
        (4,): 1, (3, 1): 1, (2, 2): 1,
    }
    with pytest.raises(RankTooLarge):
        schur_product_decompose((1,), (1,), 6)


def test_harmonic_dimension_formula():
    for k in range(3, 8):
        for r in range(9):
            assert dim(GroupFamily("so", k), (r,) if r else ()) == harmonic_dim(
                k, r
            )
