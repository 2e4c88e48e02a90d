"""Ideals (directed initial intervals) and ideal covers of finite posets.

On a finite poset every nonempty ideal is the down-cone of its greatest
element, so ideal covers reduce to covers by principal down-cones and the
decomposition of a carrier into compatibility classes of a maximum strong
antichain lands on the down-cones of the maximal elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .antichains import max_strong_antichain
from .poset import Poset, down_closure_mask, is_initial_interval, iter_bits, restrict


def is_ideal(P: Poset, xs: Iterable[int]) -> bool:
    """Initial interval whose members are pairwise compatible within it."""
    mask = P.mask_of(xs)
    if down_closure_mask(P, mask) != mask:
        return False
    elems = list(iter_bits(mask))
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            if not P.up[elems[a]] & P.up[elems[b]] & mask:
                return False
    return True


def compatibility_class(P: Poset, z: int, within: Iterable[int] | None = None) -> frozenset[int]:
    """All x compatible with z relative to `within` (default: the carrier)."""
    w = P.carrier_mask if within is None else P.mask_of(within)
    zi = P.index(z)
    out = 0
    for i in range(P.n):
        if P.up[i] & P.up[zi] & w:
            out |= 1 << i
    return P.ids_of(out)


@dataclass(frozen=True)
class IdealCover:
    target: frozenset[int]
    parts: tuple[frozenset[int], ...]
    witness: tuple[int, ...]


def et_decompose(P: Poset) -> IdealCover:
    """Cover the carrier by the compatibility classes of a maximum strong
    antichain.  Parts come in increasing id order of their antichain member;
    each part is checked to be an ideal and the union to be the carrier (a
    maximum strong antichain guarantees both, hence the hard error)."""
    s = sorted(max_strong_antichain(P).witness)
    parts = []
    union = 0
    for z in s:
        part = compatibility_class(P, z)
        if not is_ideal(P, part):
            raise AssertionError(f"compatibility class of {z} is not an ideal; decomposition bug")
        parts.append(part)
        union |= P.mask_of(part)
    if union != P.carrier_mask:
        raise AssertionError("ideal parts do not cover the carrier; decomposition bug")
    return IdealCover(P.carrier, tuple(parts), tuple(s))


def decompose_interval(P: Poset, interval: Iterable[int]) -> IdealCover:
    """et_decompose of the induced order on an initial interval, lifted back
    (restriction preserves ids, so parts are already subsets of P)."""
    xs = frozenset(interval)
    for x in xs:
        P.index(x)
    if not is_initial_interval(P, xs):
        raise ValueError("target is not an initial interval")
    return et_decompose(restrict(P, xs))


def essential_reduce(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    """Minimum-cardinality subfamily with the same union, lexicographically
    least index set among the winners; exhaustive by increasing size."""
    family = [frozenset(s) for s in sets]
    full = frozenset().union(*family) if family else frozenset()
    for k in range(len(family) + 1):
        for combo in itertools.combinations(range(len(family)), k):
            union = frozenset().union(*(family[i] for i in combo)) if combo else frozenset()
            if union == full:
                return tuple(family[i] for i in combo)
    raise AssertionError("unreachable: the full family preserves its own union")


def min_ideal_cover(P: Poset, target: Iterable[int]) -> int:
    """Minimum number of ideals of restrict(P, target) covering target.

    Exhaustive search over candidate ideals; on a finite poset the nonempty
    ideals are exactly the principal down-cones of the restriction, so those
    are the candidates, tried in increasing count and lexicographic order.
    """
    xs = frozenset(target)
    for x in xs:
        P.index(x)
    if not is_initial_interval(P, xs):
        raise ValueError("target is not an initial interval")
    Q = restrict(P, xs)
    if Q.n == 0:
        return 0
    cones_ = sorted({Q.down[i] for i in range(Q.n)})
    goal = Q.carrier_mask
    for k in range(1, len(cones_) + 1):
        for combo in itertools.combinations(range(len(cones_)), k):
            m = 0
            for c in combo:
                m |= cones_[c]
            if m == goal:
                return k
    raise AssertionError("unreachable: all down-cones together cover the target")
