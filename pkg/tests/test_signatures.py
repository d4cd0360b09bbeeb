import pytest
from hypothesis import given, strategies as st

from isotypic.errors import NotDecreasing, OddRankForSp, RankConstraint
from isotypic.signatures import (
    GroupFamily,
    canonicalize,
    conjugate,
    contains,
    iter_partitions,
    mixed,
    pad,
    parse,
    render,
    shift_mixed,
    weight,
)


@st.composite
def partitions(draw, max_part=6, max_len=6):
    n = draw(st.integers(min_value=0, max_value=max_len))
    parts = sorted(
        draw(st.lists(st.integers(1, max_part), min_size=n, max_size=n)),
        reverse=True,
    )
    return tuple(parts)


@st.composite
def mixed_signatures(draw, rank=4):
    parts = sorted(
        draw(st.lists(st.integers(-5, 5), min_size=rank, max_size=rank)),
        reverse=True,
    )
    return tuple(parts)


def test_canonicalize_trims_zeros():
    assert canonicalize([3, 1, 0, 0]) == (3, 1)
    assert canonicalize([]) == ()
    assert canonicalize([2, 2, 0]) == (2, 2)


def test_canonicalize_rejects_unsorted():
    with pytest.raises(NotDecreasing):
        canonicalize([1, 2])


@given(partitions())
def test_canonicalize_idempotent(lam):
    assert canonicalize(lam + (0, 0)) == canonicalize(canonicalize(lam))


def test_conjugate_examples():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate(()) == ()
    assert conjugate((2, 2)) == (2, 2)


@given(partitions())
def test_conjugate_involution_preserves_weight(lam):
    assert conjugate(conjugate(lam)) == lam
    assert weight(conjugate(lam)) == weight(lam)


def test_shift_mixed_examples():
    assert shift_mixed((1, 0, -2), 2) == (3, 2, 0)
    assert shift_mixed((0, 0), 0) == (0, 0)
    assert shift_mixed((2, -1), 1) == (3, 0)


@given(mixed_signatures(), st.integers(-4, 4))
def test_shift_mixed_roundtrip(sig, c):
    assert shift_mixed(shift_mixed(sig, c), -c) == sig


def test_mixed_validates_rank_and_order():
    assert mixed([2, 0, -1], 3) == (2, 0, -1)
    with pytest.raises(RankConstraint):
        mixed([1, 0], 3)
    with pytest.raises(NotDecreasing):
        mixed([0, 1], 2)


def test_render_and_parse():
    assert render((3, 1)) == "3,1"
    assert render(()) == "0"
    assert render((2, 0, 0, -1)) == "2,0,0,-1"
    assert parse("3,1") == (3, 1)
    assert parse("0") == ()
    assert parse("2,2,0") == (2, 2)


def test_pad_and_contains():
    assert pad((2, 1), 4) == (2, 1, 0, 0)
    with pytest.raises(RankConstraint):
        pad((1, 1, 1), 2)
    assert contains((2, 1), (3, 1))
    assert not contains((2, 2), (3, 1))


def test_group_family_constraints():
    assert GroupFamily("u", 3).max_signature_length() == 3
    assert GroupFamily("so", 7).max_signature_length() == 3
    with pytest.raises(OddRankForSp):
        GroupFamily("sp", 3)
    with pytest.raises(RankConstraint):
        GroupFamily("so", 4).check_signature((1, 1, 1))
    assert GroupFamily("sp", "stable").rank == "stable"


def test_iter_partitions_counts():
    assert sum(1 for _ in iter_partitions(5)) == 7
    assert sum(1 for _ in iter_partitions(8)) == 22
    assert list(iter_partitions(3, max_length=2)) == [(3,), (2, 1)]
    assert list(iter_partitions(0)) == [()]
