"""Stock posets, random posets and the small-poset census.

The census enumerates partial orders on 0..n-1 whose identity labeling is a
linear extension (element k picks a downward-closed strict down-set inside
the prefix), then dedupes by a canonical key: the minimum adjacency-matrix
encoding over permutations that respect the (|down|, |up|) invariant blocks.
Isomorphisms preserve those blocks and equal minima force equal matrices, so
the key is exact while staying fast for n up to 7.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator

from .poset import Poset, iter_bits, validate


def chain(n: int) -> Poset:
    rows = [((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)]
    return validate(rows, labels=[f"a{i}" for i in range(n)])


def antichain(n: int) -> Poset:
    return validate([1 << i for i in range(n)], labels=[f"a{i}" for i in range(n)])


def v_poset() -> Poset:
    # a0 and a1 below a common top c
    return validate([0b101, 0b110, 0b100], labels=["a0", "a1", "c"])


def n_poset() -> Poset:
    # a <= c, b <= c, b <= d
    return validate(
        [0b0101, 0b1110, 0b0100, 0b1000],
        labels=["a", "b", "c", "d"],
    )


def fan(k: int) -> Poset:
    """One root below k leaves."""
    rows = [(1 << (k + 1)) - 1] + [1 << i for i in range(1, k + 1)]
    return validate(rows, labels=["r"] + [f"l{i}" for i in range(k)])


def fan_up(k: int) -> Poset:
    """k minima below one common top."""
    rows = [1 << i | 1 << k for i in range(k)] + [1 << k]
    return validate(rows, labels=[f"m{i}" for i in range(k)] + ["t"])


def dyadic_chain(size: int) -> Poset:
    """First `size` dyadic rationals of [0, 1] in generation order, as a
    chain under numeric order.

    Generation 0 is 0 and 1; generation g >= 1 holds the odd multiples of
    2**-g, in value order.  Ids follow generation order, so deeper dyadics
    get larger ids and any two early elements keep fresh-id elements of the
    chain strictly between them, which is what the splitting construction
    feeds on.
    """
    values: list[Fraction] = []
    g = 0
    while len(values) < size:
        if g == 0:
            batch = [Fraction(0), Fraction(1)]
        else:
            batch = [Fraction(k, 2**g) for k in range(1, 2**g, 2)]
        for v in batch:
            if len(values) < size:
                values.append(v)
        g += 1
    rows = []
    for v in values:
        m = 0
        for j, w in enumerate(values):
            if v <= w:
                m |= 1 << j
        rows.append(m)
    return validate(rows, labels=[str(v) for v in values])


def random_poset(n: int, rng: random.Random, p: float | None = None) -> Poset:
    """Random order on 0..n-1 with identity as a linear extension: seed an
    upper-triangular edge set with density p, then transitively close."""
    if p is None:
        p = rng.uniform(0.1, 0.5)
    up = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                up[i] |= 1 << j
    for i in range(n - 1, -1, -1):
        acc = up[i]
        for j in iter_bits(up[i] & ~(1 << i)):
            acc |= up[j]
        up[i] = acc
    return validate(up)


def _natural_relations(n: int) -> Iterator[tuple[int, ...]]:
    """All orders on 0..n-1 with identity as a linear extension, as
    up-row bitmask tuples."""
    if n == 0:
        yield ()
        return
    for prefix in _natural_relations(n - 1):
        # candidate strict down-sets for the new top element: the downward
        # closed subsets of the prefix order
        down = [0] * (n - 1)
        for i in range(n - 1):
            for j in iter_bits(prefix[i]):
                down[j] |= 1 << i
        for d in _downsets(down, n - 1):
            rows = list(prefix)
            for i in iter_bits(d):
                rows[i] |= 1 << (n - 1)
            rows.append(1 << (n - 1))
            yield tuple(rows)


def _downsets(down: list[int], n: int) -> Iterator[int]:
    for m in range(1 << n):
        if all(down[i] & ~m == 0 for i in iter_bits(m)):
            yield m


def canonical_key(P: Poset) -> tuple:
    """Exact isomorphism key: invariant profile plus the minimum permuted
    adjacency encoding over block-respecting permutations."""
    n = P.n
    inv = [(P.down[i].bit_count(), P.up[i].bit_count()) for i in range(n)]
    order = sorted(range(n), key=lambda i: inv[i])
    blocks: list[list[int]] = []
    for i in order:
        if blocks and inv[blocks[-1][0]] == inv[i]:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    profile = tuple(sorted(inv))
    best: int | None = None
    for perm_parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [i for part in perm_parts for i in part]
        enc = 0
        for i in perm:
            row = P.up[i]
            for j in perm:
                enc = enc << 1 | (row >> j & 1)
        if best is None or enc < best:
            best = enc
    return (n, profile, best)


def census_posets(n: int) -> list[Poset]:
    """All posets on n elements up to isomorphism, ids 0..n-1, each with the
    identity as a linear extension."""
    seen = {}
    for rows in _natural_relations(n):
        P = validate(rows)
        key = canonical_key(P)
        if key not in seen:
            seen[key] = P
    return [seen[k] for k in sorted(seen)]


def all_posets(max_n: int) -> Iterator[Poset]:
    for n in range(max_n + 1):
        yield from census_posets(n)


def census_identity_report(
    max_n: int,
    *,
    check_factorization: bool = True,
    check_restriction: bool = True,
    random_count: int = 0,
    random_sizes: tuple[int, int] = (7, 10),
    seed: int = 0,
) -> dict:
    """Sweep the census and count violations of the structural identities.

    Per census class: the ideal decomposition has as many parts as the
    largest strong antichain, as the number of maximal elements, and as the
    smallest ideal cover of the carrier; optionally every carrier element
    passes the cone factorization check and every carrier subset passes the
    restriction identity.  An optional random leg repeats the decomposition
    identity on random posets drawn from the given size range.
    """
    from .antichains import max_strong_antichain
    from .ideals import et_decompose, min_ideal_cover
    from .itree import factorization_check
    from .separation import restriction_identity_check

    def decomposition_ok(P: Poset) -> bool:
        parts = len(et_decompose(P).parts)
        ell = max_strong_antichain(P).size
        mx = P.maximal_mask().bit_count()
        return parts == ell == mx == min_ideal_cover(P, P.carrier)

    rows = []
    for n in range(max_n + 1):
        classes = census_posets(n)
        row = {"n": n, "classes": len(classes), "decomposition_violations": 0}
        if check_factorization:
            row["factorization_violations"] = 0
        if check_restriction:
            row["restriction_violations"] = 0
        for P in classes:
            if not decomposition_ok(P):
                row["decomposition_violations"] += 1
            if check_factorization and any(
                not factorization_check(P, x) for x in P.carrier
            ):
                row["factorization_violations"] += 1
            if check_restriction:
                carrier = sorted(P.carrier)
                for r in range(len(carrier) + 1):
                    if any(
                        not restriction_identity_check(P, q)
                        for q in itertools.combinations(carrier, r)
                    ):
                        row["restriction_violations"] += 1
                        break
        rows.append(row)
    report: dict = {"rows": rows}
    if random_count:
        rng = random.Random(seed)
        lo, hi = random_sizes
        bad = 0
        for _ in range(random_count):
            P = random_poset(rng.randint(lo, hi), rng)
            if not decomposition_ok(P):
                bad += 1
        report["random"] = {
            "count": random_count,
            "sizes": [lo, hi],
            "seed": seed,
            "decomposition_violations": bad,
        }
    total = 0
    for row in rows:
        total += sum(v for k, v in row.items() if k.endswith("violations"))
    if random_count:
        total += report["random"]["decomposition_violations"]
    report["total_violations"] = total
    return report
