"""Signatures (partitions), mixed signatures, and group family labels.

A signature is stored as a plain tuple of weakly decreasing integers with
trailing zeros trimmed, so the same object represents a highest weight at
every rank (the zero-padding convention of the inductive-limit engine).
A mixed signature is a tuple of exactly k integers, weakly decreasing,
negative entries allowed; its rank is its length.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotDecreasing, OddRankForSp, RankConstraint

Signature = tuple[int, ...]
MixedSignature = tuple[int, ...]


def canonicalize(parts) -> Signature:
    """Trim trailing zeros from a weakly decreasing part list.

    Unsorted input is rejected, never repaired: silent sorting would hide
    caller bugs in multiplicity bookkeeping.
    """
    parts = tuple(int(p) for p in parts)
    for a, b in zip(parts, parts[1:]):
        if a < b:
            raise NotDecreasing(f"parts {list(parts)} are not weakly decreasing")
    end = len(parts)
    while end > 0 and parts[end - 1] == 0:
        end -= 1
    return parts[:end]


def weight(sig: Signature) -> int:
    return sum(sig)


def conjugate(sig: Signature) -> Signature:
    """Transpose the Young diagram. Involution; preserves weight."""
    if not sig:
        return ()
    cols = [0] * sig[0]
    for part in sig:
        for i in range(part):
            cols[i] += 1
    return tuple(cols)


def contains(inner: Signature, outer: Signature) -> bool:
    """Diagram containment inner <= outer, row by row."""
    if len(inner) > len(outer):
        return False
    return all(a <= b for a, b in zip(inner, outer))


def mixed(parts, rank: int) -> MixedSignature:
    """Validate a mixed signature of the given ambient rank."""
    parts = tuple(int(p) for p in parts)
    if len(parts) != rank:
        raise RankConstraint(f"mixed signature {list(parts)} must have exactly {rank} parts")
    for a, b in zip(parts, parts[1:]):
        if a < b:
            raise NotDecreasing(f"parts {list(parts)} are not weakly decreasing")
    return parts


def pad(sig: Signature, rank: int) -> MixedSignature:
    """Zero-pad a trimmed signature to full declared length."""
    if len(sig) > rank:
        raise RankConstraint(f"signature {list(sig)} does not fit rank {rank}")
    return sig + (0,) * (rank - len(sig))


def shift_mixed(sig: MixedSignature, c: int) -> MixedSignature:
    """Add c to every part (tensoring with the c-th determinant power)."""
    return tuple(p + c for p in sig)


def trim(parts) -> Signature:
    """Drop trailing zeros without the monotonicity check (internal use)."""
    parts = tuple(parts)
    end = len(parts)
    while end > 0 and parts[end - 1] == 0:
        end -= 1
    return parts[:end]


def render(sig: Signature | MixedSignature) -> str:
    """Canonical text form: comma-separated parts, trivial renders as "0"."""
    if not sig:
        return "0"
    return ",".join(str(p) for p in sig)


def parse(text: str) -> Signature:
    """Parse the canonical text form of a nonnegative signature."""
    text = text.strip()
    if text in ("", "0"):
        return ()
    parts = [int(p) for p in text.split(",")]
    if any(p < 0 for p in parts):
        raise NotDecreasing(f"negative part in signature {text!r}")
    return canonicalize(parts)


@dataclass(frozen=True)
class GroupFamily:
    """A classical family label: family in {"u", "so", "sp"} plus rank.

    Rank is a positive integer, or the string "stable" for inductive-limit
    decompositions.
    """

    family: str
    rank: int | str

    def __post_init__(self):
        if self.family not in ("u", "so", "sp"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.rank != "stable":
            if not isinstance(self.rank, int) or self.rank < 1:
                raise RankConstraint(f"rank must be a positive integer, got {self.rank!r}")
            if self.family == "sp" and self.rank % 2 != 0:
                raise OddRankForSp(f"Sp rank must be even, got {self.rank}")

    def max_signature_length(self) -> int | None:
        """Longest signature the family admits, or None when rank is stable."""
        if self.rank == "stable":
            return None
        if self.family == "u":
            return self.rank
        return self.rank // 2

    def check_signature(self, sig: Signature):
        limit = self.max_signature_length()
        if limit is not None and len(sig) > limit:
            raise RankConstraint(
                f"signature {list(sig)} too long for {self.family}({self.rank})"
            )

    def __str__(self):
        return f"{self.family}({self.rank})"


def iter_partitions(n: int, max_length: int | None = None, max_part: int | None = None):
    """Yield all partitions of n (weakly decreasing tuples), largest-part first."""
    if max_part is None:
        max_part = n
    if max_length is None:
        max_length = n

    def rec(remaining, bound, slots):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(bound, remaining), 0, -1):
            for rest in rec(remaining - first, first, slots - 1):
                yield (first,) + rest

    yield from rec(n, max_part, max_length)
