"""Stable-range restriction U(k) -> SO(k)/Sp(k) and two-sided reciprocity.

The Littlewood restriction rule gives the multiplicity of mu in lam as a
sum of LR coefficients c^lam_{mu,delta} over auxiliary partitions delta
with all parts even (SO) or all columns even (Sp).  Its dual-pair mirror
is the lowest-K-type multiplicity formula, and the reciprocity checker
recomputes the restriction side through the character oracle so the two
sides stay computationally independent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .characters import greedy_decompose, schur_laurent_on_so_torus
from .errors import OddRank, OutsideStableRange, RankTooSmall
from .lr import Decomposition, contragredient, lr_coefficient, tensor_mixed, tensor_multi
from .signatures import (
    GroupFamily,
    Signature,
    canonicalize,
    iter_partitions,
    pad,
    weight,
)


def _even_row_partitions(total, max_length):
    """Partitions of `total` whose parts are all even."""
    if total % 2:
        return
    for half in iter_partitions(total // 2, max_length=max_length):
        yield tuple(2 * p for p in half)


def _even_column_partitions(total, max_length):
    """Partitions of `total` whose conjugates have all parts even."""
    if total % 2:
        return
    for half in iter_partitions(total // 2, max_length=max_length // 2):
        out = []
        for p in half:
            out.extend((p, p))
        yield tuple(out)


def _littlewood_restrict(lam, k, deltas, family):
    terms: dict = {}
    wt = weight(lam)
    lam1 = lam[0] if lam else 0
    for dwt in range(0, wt + 1, 2):
        for delta in deltas(dwt, len(lam)):
            if delta and delta[0] > lam1:
                continue
            for mu in iter_partitions(wt - dwt, max_length=len(lam), max_part=lam1):
                c = lr_coefficient(mu, delta, lam)
                if c:
                    terms[mu] = terms.get(mu, 0) + c
    return Decomposition(GroupFamily(family, k), terms)


def restrict_gl_to_so(lam: Signature, k: int) -> Decomposition:
    """Branch the U(k) representation lam to SO(k) (stable range only)."""
    lam = canonicalize(lam)
    if 2 * len(lam) >= k:
        raise OutsideStableRange(
            f"Littlewood rule needs 2*length(lam) < k; got {list(lam)} at k={k}"
        )
    return _littlewood_restrict(lam, k, _even_row_partitions, "so")


def restrict_gl_to_sp(lam: Signature, k: int) -> Decomposition:
    """Branch the U(k) representation lam to Sp(k), k even (stable range)."""
    lam = canonicalize(lam)
    if k % 2:
        raise OddRank(f"Sp rank must be even, got {k}")
    if 2 * len(lam) >= k:
        raise OutsideStableRange(
            f"Littlewood rule needs 2*length(lam) < k; got {list(lam)} at k={k}"
        )
    return _littlewood_restrict(lam, k, _even_column_partitions, "sp")


def branch_rank1_closed_form(m: int) -> Decomposition:
    """Closed form of the rank-1 branching tower: one copy of (m-2i) each."""
    terms = {(m - 2 * i,) if m - 2 * i else (): 1 for i in range(m // 2 + 1)}
    return Decomposition(GroupFamily("so", "stable"), terms)


def dual_side_multiplicity(lam: Signature, mu: Signature, n: int) -> int:
    """Multiplicity of the U(n)-type lam in the dual module over mu.

    Counts lam inside mu tensored with the symmetric algebra on the
    invariant quadratics: sum over even-part delta of c^lam_{mu,delta}.
    """
    lam = canonicalize(lam)
    mu = canonicalize(mu)
    if len(lam) > n or len(mu) > n:
        raise RankTooSmall(f"signatures must fit rank {n}")
    diff = weight(lam) - weight(mu)
    if diff < 0 or diff % 2:
        return 0
    return sum(
        lr_coefficient(mu, delta, lam) for delta in _even_row_partitions(diff, n)
    )


@dataclass(frozen=True)
class ReciprocityReport:
    """Row-by-row comparison of the two multiplicity computations."""

    lam: Signature
    n: int
    k: int
    rows: tuple  # of (mu, side_a, side_b, agree)

    @property
    def all_agree(self) -> bool:
        return all(row[3] for row in self.rows)


def reciprocity_check(lam: Signature, n: int, k: int) -> ReciprocityReport:
    """Compare restriction multiplicities against the dual-side formula.

    Side A restricts lam to SO(k) through the character oracle (torus
    restriction plus greedy peeling), never through the Littlewood sum,
    so the comparison with side B is between independent computations.
    """
    lam = canonicalize(lam)
    if len(lam) > n:
        raise RankTooSmall(f"signature {list(lam)} needs n >= {len(lam)}")
    if k <= 2 * n:
        raise OutsideStableRange(f"need k > 2n; got n={n}, k={k}")
    side_a = greedy_decompose(
        schur_laurent_on_so_torus(lam, k), GroupFamily("so", k)
    )
    support = set(side_a.signatures())
    wt = weight(lam)
    lam1 = lam[0] if lam else 0
    for dwt in range(0, wt + 1, 2):
        for mu in iter_partitions(wt - dwt, max_length=min(n, len(lam)), max_part=lam1):
            if dual_side_multiplicity(lam, mu, n) > 0:
                support.add(mu)
    rows = []
    for mu in sorted(support, reverse=True):
        a = side_a[mu]
        b = dual_side_multiplicity(lam, mu, n)
        rows.append((mu, a, b, a == b))
    return ReciprocityReport(lam, n, k, tuple(rows))


def diagonal_branch(factors, k: int) -> Decomposition:
    """Restrict an outer tensor product to the diagonal U(k).

    Factors are (signature, contragredient_flag) pairs; flagged factors
    act through their dual, which turns the computation into a mixed
    tensor product at fixed rank k.
    """
    prepared = [(canonicalize(sig), bool(flag)) for sig, flag in factors]
    for sig, _ in prepared:
        if len(sig) > k:
            raise RankTooSmall(f"factor {list(sig)} needs rank >= {len(sig)}, got {k}")
    if not any(flag for _, flag in prepared):
        return tensor_multi([sig for sig, _ in prepared], k)
    mixed = [
        contragredient(pad(sig, k)) if flag else pad(sig, k)
        for sig, flag in prepared
    ]
    acc = {mixed[0]: 1}
    for nxt in mixed[1:]:
        step: dict = {}
        for sig, mult in acc.items():
            for tau, c in tensor_mixed(sig, nxt, k):
                step[tau] = step.get(tau, 0) + mult * c
        acc = step
    return Decomposition(GroupFamily("u", k), acc)
