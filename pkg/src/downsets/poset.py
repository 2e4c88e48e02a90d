"""Finite partial orders on natural-number ids, with bitmask row storage.

Elements live at dense internal indices 0..n-1; external ids are a strictly
increasing tuple of naturals and all public sets of elements are id sets.
Rows are Python ints used as bitmasks over internal indices, which keeps the
subset algebra cheap without any third-party dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class OrderViolationError(ValueError):
    """A relation failed one of the partial-order axioms.

    axiom is one of "reflexivity", "antisymmetry", "transitivity";
    witness holds the least-index witness ids (1, 2 or 3 of them).
    """

    def __init__(self, axiom: str, witness: tuple[int, ...]):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} violated at {witness}")


class CarrierError(ValueError):
    """An id outside the carrier was passed where a member was required."""


@dataclass(frozen=True)
class Poset:
    """Immutable finite poset.

    ids: strictly increasing external ids.
    up[i]: bitmask of indices j with element i below-or-equal element j.
    down[i]: bitmask of indices j with element j below-or-equal element i.
    labels: optional role string per element.
    """

    ids: tuple[int, ...]
    up: tuple[int, ...]
    down: tuple[int, ...]
    labels: tuple[str | None, ...]
    _index: dict[int, int] = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def carrier(self) -> frozenset[int]:
        return frozenset(self.ids)

    @property
    def carrier_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, x: int) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise CarrierError(f"id {x} not in carrier") from None

    def __contains__(self, x: int) -> bool:
        return x in self._index

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[self.index(x)] >> self.index(y) & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def mask_of(self, xs: Iterable[int]) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.index(x)
        return m

    def ids_of(self, mask: int) -> frozenset[int]:
        return frozenset(self.ids[i] for i in iter_bits(mask))

    def maximal_mask(self) -> int:
        """Indices with nothing strictly above them."""
        m = 0
        for i in range(self.n):
            if self.up[i] == 1 << i:
                m |= 1 << i
        return m

    def minimal_mask(self) -> int:
        m = 0
        for i in range(self.n):
            if self.down[i] == 1 << i:
                m |= 1 << i
        return m

    def cover_pairs(self) -> list[tuple[int, int]]:
        """Hasse cover pairs (x, y) with x covered by y, sorted by id."""
        out = []
        for i in range(self.n):
            strict_up = self.up[i] & ~(1 << i)
            for j in iter_bits(strict_up):
                between = strict_up & self.down[j] & ~(1 << j)
                if between == 0:
                    out.append((self.ids[i], self.ids[j]))
        out.sort()
        return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _find_violation(up: list[int], n: int) -> tuple[str, tuple[int, ...]] | None:
    # Axioms checked in spec order; within one axiom the least-index witness wins.
    for i in range(n):
        if not up[i] >> i & 1:
            return "reflexivity", (i,)
    for i in range(n):
        for j in iter_bits(up[i] & ~((1 << (i + 1)) - 1)):
            if up[j] >> i & 1:
                return "antisymmetry", (i, j)
    for i in range(n):
        above = 0
        for j in iter_bits(up[i]):
            above |= up[j]
        missing = above & ~up[i]
        if missing:
            # recover the least (j, k) pair for the report
            for j in iter_bits(up[i]):
                bad = up[j] & ~up[i]
                if bad:
                    k = next(iter_bits(bad))
                    return "transitivity", (i, j, k)
    return None


def _rows_from_relation(relation, n: int) -> list[int]:
    rows = []
    for i in range(n):
        row = relation[i]
        if isinstance(row, int):
            rows.append(row)
            continue
        if len(row) != n:
            raise ValueError(f"relation row {i} has length {len(row)}, expected {n}")
        m = 0
        for j, v in enumerate(row):
            if v:
                m |= 1 << j
        rows.append(m)
    return rows


def validate(
    relation,
    ids: Iterable[int] | None = None,
    labels: Iterable[str | None] | None = None,
) -> Poset:
    """Build a Poset from an n x n boolean relation (rows may be bitmask ints).

    Raises OrderViolationError naming the first violated axiom with the
    least-index witness ids; never repairs the input.
    """
    relation = list(relation)
    n = len(relation)
    up = _rows_from_relation(relation, n)
    ids_t = tuple(range(n)) if ids is None else tuple(ids)
    if len(ids_t) != n:
        raise ValueError("ids length does not match relation size")
    if any(b <= a for a, b in zip(ids_t, ids_t[1:])) or any(x < 0 for x in ids_t):
        raise ValueError("ids must be strictly increasing naturals")
    bad = _find_violation(up, n)
    if bad is not None:
        axiom, wit = bad
        raise OrderViolationError(axiom, tuple(ids_t[i] for i in wit))
    down = [0] * n
    for i in range(n):
        for j in iter_bits(up[i]):
            down[j] |= 1 << i
    labels_t = (None,) * n if labels is None else tuple(labels)
    if len(labels_t) != n:
        raise ValueError("labels length does not match relation size")
    return Poset(ids_t, tuple(up), tuple(down), labels_t, {x: i for i, x in enumerate(ids_t)})


def from_covers(
    n: int,
    covers: Iterable[tuple[int, int]],
    ids: Iterable[int] | None = None,
    labels: Iterable[str | None] | None = None,
) -> Poset:
    """Reflexive-transitive closure of cover pairs (given as index pairs), then validate."""
    up = [1 << i for i in range(n)]
    for a, b in covers:
        up[a] |= 1 << b
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in iter_bits(up[i]):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return validate(up, ids, labels)


@dataclass(frozen=True)
class Cones:
    up: frozenset[int]
    down: frozenset[int]
    strict_up: frozenset[int]
    strict_down: frozenset[int]
    incomparable: frozenset[int]


def cones(P: Poset, x: int) -> Cones:
    """Up/down/strict/incomparable cones of x; the five sets tile the carrier."""
    i = P.index(x)
    self_bit = 1 << i
    up_m = P.up[i]
    down_m = P.down[i]
    inc_m = P.carrier_mask & ~(up_m | down_m)
    return Cones(
        up=P.ids_of(up_m),
        down=P.ids_of(down_m),
        strict_up=P.ids_of(up_m & ~self_bit),
        strict_down=P.ids_of(down_m & ~self_bit),
        incomparable=P.ids_of(inc_m),
    )


def down_closure_mask(P: Poset, mask: int) -> int:
    out = 0
    for i in iter_bits(mask):
        out |= P.down[i]
    return out


def down_closure(P: Poset, xs: Iterable[int]) -> frozenset[int]:
    """Least initial interval containing xs."""
    return P.ids_of(down_closure_mask(P, P.mask_of(xs)))


def compatible(P: Poset, x: int, y: int, within: Iterable[int] | None = None) -> bool:
    """True iff x and y have a common upper bound, searched inside `within`
    (default: the whole carrier). x and y need not lie in `within`."""
    w = P.carrier_mask if within is None else P.mask_of(within)
    return bool(P.up[P.index(x)] & P.up[P.index(y)] & w)


def is_initial_interval(P: Poset, xs: Iterable[int]) -> bool:
    m = P.mask_of(xs)
    return down_closure_mask(P, m) == m


def restrict(P: Poset, q: Iterable[int]) -> Poset:
    """Induced suborder on q; external ids and labels are preserved."""
    mask = P.mask_of(q)
    keep = list(iter_bits(mask))
    pos = {i: k for k, i in enumerate(keep)}
    up = []
    for i in keep:
        m = 0
        for j in iter_bits(P.up[i] & mask):
            m |= 1 << pos[j]
        up.append(m)
    ids = tuple(P.ids[i] for i in keep)
    labels = tuple(P.labels[i] for i in keep)
    down = [0] * len(keep)
    for a in range(len(keep)):
        for b in iter_bits(up[a]):
            down[b] |= 1 << a
    return Poset(ids, tuple(up), tuple(down), labels, {x: i for i, x in enumerate(ids)})


def lex_sum(P: Poset, parts: dict[int, Poset]) -> Poset:
    """Lexicographic sum: replace each x in P by parts[x].

    (x, a) <= (y, b) iff x < y in P, or x = y and a <= b in parts[x].
    The result gets fresh dense ids in (P index, part index) order; labels
    compose as "<outer>.<inner>" from labels when present, ids otherwise.
    """
    missing = [x for x in P.ids if x not in parts]
    if missing:
        raise CarrierError(f"no part supplied for element {missing[0]}")
    offsets = []
    total = 0
    for i in range(P.n):
        offsets.append(total)
        total += parts[P.ids[i]].n
    up = [0] * total
    labels: list[str | None] = [None] * total
    for i in range(P.n):
        Q = parts[P.ids[i]]
        base = offsets[i]
        outer = P.labels[i] if P.labels[i] is not None else str(P.ids[i])
        strict_above = P.up[i] & ~(1 << i)
        above_mask = 0
        for j in iter_bits(strict_above):
            Qj = parts[P.ids[j]]
            above_mask |= ((1 << Qj.n) - 1) << offsets[j]
        for a in range(Q.n):
            inner = Q.labels[a] if Q.labels[a] is not None else str(Q.ids[a])
            labels[base + a] = f"{outer}.{inner}"
            m = above_mask
            for b in iter_bits(Q.up[a]):
                m |= 1 << (base + b)
            up[base + a] = m
    return validate(up, labels=labels)


def density_defect(P: Poset, q: Iterable[int], within: Iterable[int] | None = None) -> int:
    """Number of pairs x < y in the chain q with no z strictly between them.

    z ranges over q itself by default; pass `within` to search a larger
    ambient set, which is what a vanishing-defect density certificate on
    growing truncations needs.
    """
    mask = P.mask_of(q)
    elems = list(iter_bits(mask))
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            i, j = elems[a], elems[b]
            if not (P.up[i] >> j & 1 or P.up[j] >> i & 1):
                raise ValueError(
                    f"q is not a chain: {P.ids[i]} and {P.ids[j]} are incomparable"
                )
    zmask = mask if within is None else P.mask_of(within)
    count = 0
    for i in elems:
        for j in iter_bits(P.up[i] & mask & ~(1 << i)):
            between = P.up[i] & P.down[j] & zmask & ~(1 << i) & ~(1 << j)
            if between == 0:
                count += 1
    return count
