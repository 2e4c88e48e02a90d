"""Brute-force reference implementations.

Each oracle recomputes its notion straight from the raw comparison data,
by subset filtering or exhaustive search, without calling the library
algorithm it is checking.  Deliberately slow and obvious.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence


def subsets(items: Sequence[int]):
    for bits in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if bits >> i & 1)


def is_downset(P, s: frozenset[int]) -> bool:
    return all(
        x in s
        for y in s
        for x in P.carrier
        if P.leq(x, y)
    )


def brute_intervals(P) -> list[frozenset[int]]:
    items = sorted(P.carrier)
    return [s for s in subsets(items) if is_downset(P, s)]


def brute_interval_count(P) -> int:
    return len(brute_intervals(P))


def has_common_upper(P, x: int, y: int) -> bool:
    return any(P.leq(x, z) and P.leq(y, z) for z in P.carrier)


def is_directed(P, s: frozenset[int]) -> bool:
    # every pair needs an upper bound inside s
    return all(
        any(P.leq(x, z) and P.leq(y, z) for z in s)
        for x in s
        for y in s
    )


def brute_ideals(P) -> list[frozenset[int]]:
    return [s for s in brute_intervals(P) if is_directed(P, s)]


def brute_is_strong_antichain(P, s: Iterable[int]) -> bool:
    s = list(s)
    for i, x in enumerate(s):
        for y in s[i + 1 :]:
            if has_common_upper(P, x, y):
                return False
    return True


def brute_max_strong_antichain(P) -> int:
    best = 0
    for s in subsets(sorted(P.carrier)):
        if brute_is_strong_antichain(P, s):
            best = max(best, len(s))
    return best


def brute_min_ideal_cover(P) -> int:
    if not P.carrier:
        return 0
    ideals = brute_ideals(P)
    for k in range(1, len(ideals) + 1):
        for combo in itertools.combinations(ideals, k):
            if frozenset().union(*combo) == P.carrier:
                return k
    raise AssertionError("carrier not coverable by its own ideals")


def brute_min_union_subfamily(sets: Sequence[frozenset[int]]) -> int:
    """Smallest subfamily cardinality with the same union as the family."""
    target = frozenset().union(*sets) if sets else frozenset()
    for k in range(len(sets) + 1):
        for combo in itertools.combinations(range(len(sets)), k):
            if frozenset().union(*(sets[i] for i in combo)) == target:
                return k
    raise AssertionError("the full family always preserves its own union")


def kb_ref(s: Sequence[int], t: Sequence[int]) -> int:
    """Reference comparison: an extension precedes its prefix, otherwise the
    first disagreement decides; written independently of the library."""
    s, t = tuple(s), tuple(t)
    if s == t:
        return 0
    if s[: len(t)] == t:
        return -1
    if t[: len(s)] == s:
        return 1
    i = next(k for k in range(min(len(s), len(t))) if s[k] != t[k])
    return -1 if s[i] < t[i] else 1


def down_set_of(P, xs) -> set[int]:
    """Downward closure computed pointwise from leq, nothing shared."""
    return {y for y in P.carrier if any(P.leq(y, x) for x in xs)}


def some_maximal_antichain(P) -> list[int]:
    """Greedy maximal antichain in id order; maximality is by construction."""
    out: list[int] = []
    for x in sorted(P.carrier):
        if all(not (P.leq(x, y) or P.leq(y, x)) for y in out):
            out.append(x)
    return out
