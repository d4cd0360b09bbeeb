import random

import pytest

from isotypic.errors import NoStabilization
from isotypic.lr import Decomposition, tensor_multi
from isotypic.signatures import GroupFamily, iter_partitions
from isotypic.stable_limits import (
    identity_multiplicity,
    stabilize,
    stable_branch,
    stable_tensor,
)

QUAD_STABLE = {
    (8,): 1, (7, 1): 3, (6, 2): 5, (5, 3): 5, (4, 4): 2,
    (6, 1, 1): 3, (5, 2, 1): 6, (4, 3, 1): 5, (4, 2, 2): 3, (3, 3, 2): 2,
    (5, 1, 1, 1): 1, (4, 2, 1, 1): 2, (3, 3, 1, 1): 1, (3, 2, 2, 1): 1,
}


def test_quadruple_product_stabilizes_at_four():
    res = stable_tensor([(1,), (2,), (2,), (3,)])
    assert res.k0 == 4
    assert res.stable.terms == QUAD_STABLE
    assert res.stable.group == GroupFamily("u", "stable")


def test_single_factor_is_immediately_stable():
    res = stable_tensor([(2, 1)])
    assert res.k0 == 2
    assert res.stable.terms == {(2, 1): 1}


def test_pair_of_boxes():
    res = stable_tensor([(1,), (1,)])
    assert res.k0 == 2
    assert res.stable.terms == {(2,): 1, (1, 1): 1}
    # The k=1 probe is a strict prefix of the stable table.
    first_rank, first = res.probes[0]
    assert first_rank == 1 and first.terms == {(2,): 1}


def test_probes_are_length_filtered_prefixes():
    rng = random.Random(13)
    parts = [p for w in range(1, 5) for p in iter_partitions(w)]
    for _ in range(12):
        factors = [rng.choice(parts) for _ in range(rng.randint(1, 3))]
        res = stable_tensor(factors)
        for k, probe in res.probes:
            expected = {
                sig: mult for sig, mult in res.stable.terms.items() if len(sig) <= k
            }
            assert probe.terms == expected, (factors, k)


def test_stabilize_cap_raises():
    def runaway(k):
        return Decomposition(GroupFamily("u", k), {(k,): 1})

    with pytest.raises(NoStabilization):
        stabilize(runaway, 1)


def test_stable_branch_so():
    res = stable_branch((3,), "so")
    assert res.stable.terms == {(3,): 1, (1,): 1}
    assert res.stable.group == GroupFamily("so", "stable")
    assert stable_branch((), "so").stable.terms == {(): 1}
    assert stable_branch((2, 2), "so").stable.terms == {
        (2, 2): 1, (2,): 1, (): 1,
    }


def test_stable_branch_sp_probes_even_ranks():
    res = stable_branch((2, 2), "sp")
    assert res.stable.terms == {(2, 2): 1, (1, 1): 1, (): 1}
    assert all(k % 2 == 0 for k, _ in res.probes)
    assert res.stable.group == GroupFamily("sp", "stable")


def test_stable_branch_rank1_tower():
    from isotypic.branching import branch_rank1_closed_form

    for m in range(11):
        res = stable_branch((m,) if m else (), "so")
        assert res.stable.terms == branch_rank1_closed_form(m).terms


def test_identity_multiplicity_examples():
    assert identity_multiplicity([(1,), (1,), (1,)], (2, 1)) == 2
    assert identity_multiplicity([(2, 1)], (2, 1)) == 1
    assert identity_multiplicity([(1,)], (2,)) == 0
    assert identity_multiplicity([(1,), (2,)], (2, 1)) == 1


def test_identity_multiplicity_matches_stable_tensor():
    rng = random.Random(29)
    parts = [p for w in range(1, 5) for p in iter_partitions(w)]
    for _ in range(15):
        factors = [rng.choice(parts) for _ in range(rng.randint(1, 2))]
        res = stable_tensor(factors)
        candidates = res.stable.signatures() + [(1, 1, 1, 1), (5,)]
        mu = rng.choice(candidates)
        assert identity_multiplicity(factors, mu) == res.stable[mu]


def test_stable_probe_consistency_with_direct_computation():
    res = stable_tensor([(2,), (1, 1)])
    for k, probe in res.probes:
        assert probe.terms == tensor_multi([(2,), (1, 1)], k).terms
