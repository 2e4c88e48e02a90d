"""Separating initial intervals: put all of A inside, keep all of B out.

The workhorse is the downward closure of A, which works exactly when no
member of B sits below a member of A.  The staged variant reveals members by
id and emits a tree approximation; the antichain variants produce the
interval determined by a maximal antichain together with a lower bound
certificate on how many ideals any cover of it needs.
"""

from __future__ import annotations

from typing import Iterable

from .antichains import is_antichain
from .ideals import min_ideal_cover
from .itree import ApproxSeq, tp_member
from .poset import Poset, down_closure_mask, is_initial_interval, iter_bits, restrict


def separate_down(P: Poset, a: Iterable[int], b: Iterable[int]) -> frozenset[int]:
    """Least initial interval containing a and avoiding b.

    Precondition: no member of b lies below-or-equal a member of a; the
    least offending pair (in id order) is reported otherwise.
    """
    am = P.mask_of(a)
    bm = P.mask_of(b)
    closure = down_closure_mask(P, am)
    if closure & bm:
        for i in sorted(iter_bits(am), key=lambda i: P.ids[i]):
            hit = P.down[i] & bm
            if hit:
                y = min(P.ids[j] for j in iter_bits(hit))
                raise ValueError(
                    f"separation precondition violated: {y} lies below {P.ids[i]}"
                )
    return P.ids_of(closure)


def separation_tree(P: Poset, a: Iterable[int], b: Iterable[int], k: int) -> ApproxSeq:
    """Stage-k approximation of the separating interval.

    Members of a and b are revealed once their id is below k; position x gets
    1 iff x is a carrier member below-or-equal a revealed member of a.  The
    output is a tree member and honors both separation clauses on revealed
    members (a failure would contradict the precondition, hence hard errors).
    """
    am = P.mask_of(a)
    bm = P.mask_of(b)
    if k < 0:
        raise ValueError("stage must be nonnegative")
    revealed_a = 0
    for i in iter_bits(am):
        if P.ids[i] < k:
            revealed_a |= 1 << i
    reach = down_closure_mask(P, revealed_a)
    bits = []
    for pos in range(k):
        if pos in P and reach >> P.index(pos) & 1:
            bits.append(1)
        else:
            bits.append(0)
    sigma = tuple(bits)
    if not tp_member(P, sigma):
        raise AssertionError("separation approximation left the tree; bug")
    for i in iter_bits(am):
        if P.ids[i] < k and not sigma[P.ids[i]]:
            raise AssertionError("revealed member of a not included; bug")
    for i in iter_bits(bm):
        if P.ids[i] < k and sigma[P.ids[i]]:
            raise ValueError(
                f"separation precondition violated: {P.ids[i]} in b lies below "
                "a revealed member of a"
            )
    return sigma


def _is_maximal_antichain(P: Poset, mask: int) -> bool:
    if not is_antichain(P, P.ids_of(mask)):
        return False
    for i in range(P.n):
        if mask >> i & 1:
            continue
        if not (P.up[i] | P.down[i]) & mask:
            return False
    return True


def maximal_antichain_interval(P: Poset, d: Iterable[int]) -> frozenset[int]:
    """The initial interval {x : x below-or-equal some member of d}.

    For a maximal antichain d, sitting below some member is equivalent to
    not sitting strictly above any member; both sides are evaluated for
    every element and compared (a mismatch would falsify the equivalence,
    hence the hard error).
    """
    dm = P.mask_of(d)
    if not _is_maximal_antichain(P, dm):
        raise ValueError("d is not a maximal antichain")
    below = 0
    not_above = 0
    for i in range(P.n):
        if P.up[i] & dm:
            below |= 1 << i
        strictly_above = P.down[i] & dm & ~(1 << i)
        if not strictly_above:
            not_above |= 1 << i
    if below != not_above:
        raise AssertionError("maximal-antichain equivalence failed; bug")
    return P.ids_of(below)


def antichain_separator(P: Poset, d: Iterable[int]) -> tuple[frozenset[int], int]:
    """Initial interval containing the antichain d with nothing strictly
    above any member, plus a certificate: the minimum ideal-cover size of
    the interval, which is at least |d|."""
    dm = P.mask_of(d)
    if not is_antichain(P, P.ids_of(dm)):
        raise ValueError("d is not an antichain")
    below = 0
    above = 0
    for i in range(P.n):
        if P.up[i] & dm:
            below |= 1 << i
        if P.down[i] & dm & ~(1 << i):
            above |= 1 << i
    interval = below & ~above
    ids = P.ids_of(interval)
    if not is_initial_interval(P, ids):
        raise AssertionError("separator is not an initial interval; bug")
    certificate = min_ideal_cover(P, ids)
    if certificate < dm.bit_count():
        raise AssertionError("certificate undercuts the antichain size; bug")
    return ids, certificate


def restriction_identity_check(P: Poset, q: Iterable[int]) -> bool:
    """Intervals of the induced order on q are exactly the q-traces of
    intervals of P."""
    from .itree import iter_intervals

    qs = frozenset(q)
    sub = restrict(P, qs)
    lhs = set(iter_intervals(sub))
    rhs = {iv & qs for iv in iter_intervals(P)}
    return lhs == rhs
