"""The binary tree of finite approximations to initial intervals.

A sequence of bits indexed by ids belongs to the tree when the 1-positions
are carrier members and no decided element sits below a decided 1 without
being 1 itself.  Full-depth members are exactly the characteristic functions
of initial intervals, which gives both the enumerator and the splitting
construction used to manufacture incompatible approximations along a dense
chain.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .poset import (
    CarrierError,
    Poset,
    down_closure_mask,
    iter_bits,
    restrict,
)

ApproxSeq = tuple[int, ...]

DEFAULT_MAX_ENUM = 1 << 20


class EnumerationCapError(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"interval enumeration exceeded the cap of {cap} sets")


class SplitError(RuntimeError):
    """No admissible witness pair exists in the chain (truncation too sparse)."""


def tp_member(P: Poset, tau: Iterable[int]) -> bool:
    """Membership in the approximation tree.

    Positions index ids; positions outside the carrier must carry 0, and for
    decided carrier positions a 1 at y forces a 1 at every decided x below y.
    """
    tau = tuple(tau)
    if any(b not in (0, 1) for b in tau):
        return False
    ones = 0
    zeros = 0
    for pos, b in enumerate(tau):
        if pos in P:
            i = P.index(pos)
            if b:
                ones |= 1 << i
            else:
                zeros |= 1 << i
        elif b:
            return False
    for i in iter_bits(ones):
        if P.down[i] & zeros:
            return False
    return True


def _decided_masks(P: Poset, tau: ApproxSeq) -> tuple[int, int]:
    ones = 0
    zeros = 0
    for pos, b in enumerate(tau):
        if pos in P:
            i = P.index(pos)
            if b:
                ones |= 1 << i
            else:
                zeros |= 1 << i
    return ones, zeros


def iter_intervals(P: Poset) -> Iterator[frozenset[int]]:
    """Depth-first traversal of the tree truncated at max id + 1, yielding
    each initial interval once, in lexicographic bit order (0 before 1)."""
    depth = max(P.ids) + 1 if P.n else 0
    idx_at: list[int | None] = [None] * depth
    for pos in P.ids:
        idx_at[pos] = P.index(pos)

    def walk(pos: int, in_mask: int, out_mask: int) -> Iterator[frozenset[int]]:
        if pos == depth:
            yield P.ids_of(in_mask)
            return
        i = idx_at[pos]
        if i is None:
            yield from walk(pos + 1, in_mask, out_mask)
            return
        if not P.up[i] & in_mask:
            yield from walk(pos + 1, in_mask, out_mask | 1 << i)
        if not P.down[i] & out_mask:
            yield from walk(pos + 1, in_mask | 1 << i, out_mask)

    if depth >= sys.getrecursionlimit() - 100:
        raise ValueError(f"id universe too deep to enumerate recursively ({depth})")
    return walk(0, 0, 0)


def enumerate_intervals(P: Poset, max_enum: int = DEFAULT_MAX_ENUM) -> list[frozenset[int]]:
    out = []
    for iv in iter_intervals(P):
        if len(out) >= max_enum:
            raise EnumerationCapError(max_enum)
        out.append(iv)
    return out


def count_intervals(P: Poset) -> int:
    """Exact count of initial intervals.

    Memoized recursion on sub-carriers: with x the least-index minimal
    element of Q, the intervals avoiding x live in Q minus the up-cone of x
    and those containing x correspond to intervals of Q minus its down-cone.
    """
    up = P.up
    down = P.down

    @lru_cache(maxsize=None)
    def count(mask: int) -> int:
        if mask == 0:
            return 1
        for i in iter_bits(mask):
            if down[i] & mask == 1 << i:
                return count(mask & ~(up[i] & mask)) + count(mask & ~(down[i] & mask))
        raise AssertionError("nonempty finite poset with no minimal element")

    result = count(P.carrier_mask)
    count.cache_clear()
    return result


def free_for(P: Poset, tau: Iterable[int], x: int) -> bool:
    """x can still go either way: no decided 1 above-or-equal x and no
    decided 0 below-or-equal x (decided positions range over the carrier)."""
    tau = tuple(tau)
    if not tp_member(P, tau):
        raise ValueError("tau is not in the approximation tree")
    i = P.index(x)
    ones, zeros = _decided_masks(P, tau)
    return not (P.up[i] & ones) and not (P.down[i] & zeros)


def cone_restrict(
    P: Poset,
    below: Iterable[int] = (),
    above: Iterable[int] = (),
    apart: Iterable[int] = (),
) -> Poset:
    """Induced order on the intersection of strict-down cones of `below`,
    strict-up cones of `above` and incomparability cones of `apart`."""
    m = P.carrier_mask
    for x in below:
        i = P.index(x)
        m &= P.down[i] & ~(1 << i)
    for x in above:
        i = P.index(x)
        m &= P.up[i] & ~(1 << i)
    for x in apart:
        i = P.index(x)
        m &= ~(P.up[i] | P.down[i])
    return restrict(P, P.ids_of(m))


def factorization_check(P: Poset, x: int) -> bool:
    """Two product decompositions of the interval family at a point.

    Intervals avoiding x are (interval of the strict-down cone) unioned with
    the closure of (interval of the incomparability cone); intervals
    containing x are closures of {x} plus an interval of the strict-up cone
    plus an interval of the incomparability cone.
    """
    i = P.index(x)
    all_ivs = set(iter_intervals(P))
    without = {iv for iv in all_ivs if x not in iv}
    with_x = all_ivs - without

    down_part = restrict(P, P.ids_of(P.down[i] & ~(1 << i)))
    up_part = restrict(P, P.ids_of(P.up[i] & ~(1 << i)))
    inc_part = restrict(P, P.ids_of(P.carrier_mask & ~(P.up[i] | P.down[i])))

    built_without = set()
    for iv1 in iter_intervals(down_part):
        for iv2 in iter_intervals(inc_part):
            built_without.add(iv1 | frozenset(down_closure_ids(P, iv2)))
    if built_without != without:
        return False

    built_with = set()
    for iv1 in iter_intervals(up_part):
        for iv2 in iter_intervals(inc_part):
            built_with.add(frozenset(down_closure_ids(P, {x} | iv1 | iv2)))
    return built_with == with_x


def down_closure_ids(P: Poset, xs: Iterable[int]) -> frozenset[int]:
    return P.ids_of(down_closure_mask(P, P.mask_of(xs)))


@dataclass(frozen=True)
class SplitResult:
    tau0: ApproxSeq
    tau1: ApproxSeq
    free0: tuple[int, int]
    free1: tuple[int, int]


def _branch(
    P: Poset,
    tau: ApproxSeq,
    length: int,
    ones: int,
    zeros: int,
    p: int,
    q: int,
) -> ApproxSeq:
    # Case analysis: non-carrier 0; forced by tau; else free elements get 1
    # strictly below p, 0 strictly above q, 0 otherwise.
    bits = []
    pi, qi = P.index(p), P.index(q)
    for pos in range(length):
        if pos not in P:
            bits.append(0)
            continue
        i = P.index(pos)
        if P.down[i] & zeros:
            bits.append(0)
        elif P.up[i] & ones:
            bits.append(1)
        elif P.up[i] >> pi & 1 and i != pi:
            bits.append(1)
        elif P.down[i] >> qi & 1 and i != qi:
            bits.append(0)
        else:
            bits.append(0)
    return tuple(bits)


def split(
    P: Poset,
    tau: Iterable[int],
    q_chain: Iterable[int],
    a: int,
    b: int,
    c: int,
) -> SplitResult:
    """Extend tau to two incompatible tree members of length id(b)+1 that
    disagree at b, with a fresh free pair per branch.

    For the 0 branch a witness pair p < q is drawn from the chain strictly
    between a and b; for the 1 branch between b and c.  Admissible pairs have
    ids above id(b), no carrier element with a smaller id strictly between
    them, and both members free for the branch output; pairs are tried in
    lexicographic id order and running out of them is reported as an error.
    """
    tau = tuple(tau)
    if not tp_member(P, tau):
        raise ValueError("tau is not in the approximation tree")
    q_mask = P.mask_of(q_chain)
    q_elems = list(iter_bits(q_mask))
    for u in range(len(q_elems)):
        for v in range(u + 1, len(q_elems)):
            i, j = q_elems[u], q_elems[v]
            if not (P.up[i] >> j & 1 or P.up[j] >> i & 1):
                raise ValueError("q is not a chain")
    for x in (a, b, c):
        if not q_mask >> P.index(x) & 1:
            raise ValueError(f"{x} is not in the chain")
        if not free_for(P, tau, x):
            raise ValueError(f"{x} is not free for tau")
    ai, bi, ci = P.index(a), P.index(b), P.index(c)
    if not (P.up[ai] >> bi & 1 and P.up[bi] >> ci & 1 and ai != bi and bi != ci):
        raise ValueError("need a < b < c in the order")

    length = b + 1
    ones, zeros = _decided_masks(P, tau)
    small_ids = 0
    for pos in range(b):
        if pos in P:
            small_ids |= 1 << P.index(pos)

    def find(lo: int, hi: int) -> tuple[ApproxSeq, tuple[int, int]]:
        lo_i, hi_i = P.index(lo), P.index(hi)
        window = P.up[lo_i] & P.down[hi_i] & q_mask & ~(1 << lo_i) & ~(1 << hi_i)
        cand = sorted((P.ids[i] for i in iter_bits(window) if P.ids[i] > b))
        for p in cand:
            for r in cand:
                if r == p or not P.lt(p, r):
                    continue
                between = P.up[P.index(p)] & P.down[P.index(r)] & small_ids
                between &= ~(1 << P.index(p)) & ~(1 << P.index(r))
                if between:
                    continue
                out = _branch(P, tau, length, ones, zeros, p, r)
                if free_for(P, out, p) and free_for(P, out, r):
                    return out, (p, r)
        raise SplitError(
            f"no admissible witness pair in the chain between {lo} and {hi}"
        )

    tau0, pair0 = find(a, b)
    tau1, pair1 = find(b, c)
    if tau0[b] != 0 or tau1[b] != 1:
        raise AssertionError("branch outputs do not disagree at b; split bug")
    if not (tp_member(P, tau0) and tp_member(P, tau1)):
        raise AssertionError("branch output left the tree; split bug")
    return SplitResult(tau0, tau1, pair0, pair1)


def iterated_split(
    P: Poset,
    depth: int,
    q_chain: Iterable[int] | None = None,
) -> list[ApproxSeq]:
    """Drive split through a full binary recursion and return the 2**depth
    leaf approximations, pairwise incompatible as sequences.

    At each node the elements of the chain still free for the current
    approximation are listed in chain order; the two extremes serve as the
    outer triple members and every interior candidate is tried as the middle
    element in increasing id order, backtracking on failure.  One split
    consumes seven free chain elements (the triple plus two witness pairs)
    and the two branches draw from disjoint sides of the middle element, so
    a full recursion of the requested depth needs at least 4 * 2**depth - 1
    free elements; chains too sparse for that raise the split error.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    q_mask = P.carrier_mask if q_chain is None else P.mask_of(q_chain)

    def window(tau: ApproxSeq) -> list[int]:
        free = [i for i in iter_bits(q_mask) if free_for(P, tau, P.ids[i])]
        free.sort(key=lambda i: P.down[i].bit_count())
        return [P.ids[i] for i in free]

    def rec(tau: ApproxSeq, d: int) -> list[ApproxSeq]:
        if d == 0:
            return [tau]
        w = window(tau)
        if len(w) < 7:
            raise SplitError(
                f"free window holds {len(w)} chain elements; one split needs 7"
            )
        last: SplitError | None = None
        for mid in sorted(w[3:-3]):
            try:
                res = split(P, tau, P.ids_of(q_mask), w[0], mid, w[-1])
                return rec(res.tau0, d - 1) + rec(res.tau1, d - 1)
            except SplitError as err:
                last = err
        assert last is not None
        raise last

    return rec((), depth)
