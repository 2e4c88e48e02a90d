"""Antichains and strong antichains (pairwise incompatible sets).

An antichain has pairwise order-incomparable members; a strong antichain has
pairwise incompatible members (no two share an upper bound in the carrier).
Greedy extension scans ids in increasing order and keeps what still fits,
mirroring the recursion f(x) = 1 iff what was accepted so far plus x still
qualifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .poset import Poset, iter_bits


def is_antichain(P: Poset, xs: Iterable[int]) -> bool:
    mask = P.mask_of(xs)
    for i in iter_bits(mask):
        if (P.up[i] | P.down[i]) & mask & ~(1 << i):
            return False
    return True


def is_strong_antichain(P: Poset, xs: Iterable[int]) -> bool:
    elems = list(iter_bits(P.mask_of(xs)))
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            if P.up[elems[a]] & P.up[elems[b]]:
                return False
    return True


def _greedy_extend(P: Poset, seed_mask: int, conflict) -> int:
    acc = seed_mask
    for i in range(P.n):
        if acc >> i & 1:
            continue
        if not conflict(i, acc):
            acc |= 1 << i
    return acc


def extend_maximal_antichain(P: Poset, d: Iterable[int]) -> frozenset[int]:
    """Greedy superset of the antichain d that no further element fits into."""
    seed = P.mask_of(d)
    if not is_antichain(P, P.ids_of(seed)):
        raise ValueError("d is not an antichain")

    def conflict(i: int, acc: int) -> bool:
        return bool((P.up[i] | P.down[i]) & acc & ~(1 << i))

    return P.ids_of(_greedy_extend(P, seed, conflict))


def extend_maximal_strong_antichain(P: Poset, s: Iterable[int]) -> frozenset[int]:
    seed = P.mask_of(s)
    if not is_strong_antichain(P, P.ids_of(seed)):
        raise ValueError("s is not a strong antichain")

    def conflict(i: int, acc: int) -> bool:
        for j in iter_bits(acc & ~(1 << i)):
            if P.up[i] & P.up[j]:
                return True
        return False

    return P.ids_of(_greedy_extend(P, seed, conflict))


@dataclass(frozen=True)
class StrongAntichainMax:
    size: int
    witness: frozenset[int]


def max_strong_antichain(P: Poset) -> StrongAntichainMax:
    """Maximum strong antichain size with an attaining witness.

    On a finite poset the maximum equals the number of maximal elements, and
    the set of all maximal elements attains it (each element sits below some
    maximal one, and distinct maximal elements never share an upper bound),
    so that set is returned as the witness.  The exponential subset search
    lives in the test suite as the independent oracle.
    """
    wit = P.maximal_mask()
    return StrongAntichainMax(wit.bit_count(), P.ids_of(wit))


@dataclass(frozen=True)
class ConeRefinement:
    root: int
    fan: frozenset[int]


def refine_cone(P: Poset, s: Iterable[int], t: Iterable[int], k: int) -> ConeRefinement:
    """Pigeonhole a strong antichain t of size |s|*k into one up-cone.

    For each y in t pick the least pair (u, v) with u in s and a common upper
    bound v of u and y; some u collects at least k distinct v values, and the
    least such u is returned with its fan.
    """
    s_idx = sorted(iter_bits(P.mask_of(s)))
    t_idx = sorted(iter_bits(P.mask_of(t)))
    if not is_strong_antichain(P, P.ids_of(P.mask_of(s))):
        raise ValueError("s is not a strong antichain")
    if not is_strong_antichain(P, P.ids_of(P.mask_of(t))):
        raise ValueError("t is not a strong antichain")
    if len(t_idx) != len(s_idx) * k:
        raise ValueError(f"expected |t| = |s|*k = {len(s_idx) * k}, got {len(t_idx)}")
    buckets: dict[int, set[int]] = {u: set() for u in s_idx}
    for y in t_idx:
        found = None
        for u in s_idx:
            common = P.up[u] & P.up[y]
            if common:
                found = (u, next(iter_bits(common)))
                break
        if found is None:
            raise ValueError(
                f"inconsistency: {P.ids[y]} is compatible with no member of s "
                "(impossible when s is a subset-maximal strong antichain)"
            )
        buckets[found[0]].add(found[1])
    for u in s_idx:
        if len(buckets[u]) >= k:
            fan = 0
            for v in buckets[u]:
                fan |= 1 << v
            return ConeRefinement(P.ids[u], P.ids_of(fan))
    raise AssertionError("pigeonhole failed; refine_cone invariant broken")
