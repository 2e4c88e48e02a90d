"""Finite encodings of functions into posets, and what order-theoretic
procedures recover from them.

Each builder takes an injective value table (two disjoint tables for the
separation and tree variants) and lays out a finite poset whose carrier is a
horizon-bounded slice of labelled element families.  The matching decoder
reads the table's range, or its set of non-final stages, back off an
order-theoretic object: a maximal strong antichain, an initial interval, an
ideal cover, a maximal antichain.  Builders construct the literal relation
and run it through the axiom checker; a validation failure is a bug in the
rules, not in the input, so it propagates as the checker's own error.

The module also houses the Kleene-Brouwer comparison on finite sequences and
the decomposition of a finite tree into comparison-defined layers along a
distinguished path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .antichains import is_antichain, is_strong_antichain
from .ideals import IdealCover, is_ideal
from .poset import Poset, compatible, is_initial_interval, validate


@dataclass(frozen=True)
class FnTable:
    """Injective finite value table n -> values[n], all values nonnegative."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if any(v < 0 for v in vals):
            raise ValueError("table values must be nonnegative")
        if len(set(vals)) != len(vals):
            raise ValueError("table must be injective")

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, n: int) -> int:
        return self.values[n]

    @property
    def range(self) -> frozenset[int]:
        return frozenset(self.values)


def _as_table(f: FnTable | Sequence[int]) -> FnTable:
    return f if isinstance(f, FnTable) else FnTable(tuple(f))


def _require_disjoint(f: FnTable, g: FnTable) -> None:
    overlap = f.range & g.range
    if overlap:
        raise ValueError(f"table ranges must be disjoint; both contain {min(overlap)}")


def classify_stages(f: FnTable | Sequence[int]) -> tuple[str, ...]:
    """Label each stage of the table "false" or "true-so-far".

    Stage n is false when some later stage takes a smaller value; with an
    injective table the true-so-far stages are exactly the running minima
    read from the right.
    """
    f = _as_table(f)
    out = []
    for n in range(len(f)):
        later_drop = any(f(k) < f(n) for k in range(n + 1, len(f)))
        out.append("false" if later_drop else "true-so-far")
    return tuple(out)


@dataclass(frozen=True)
class GadgetInstance:
    """A built encoding: the poset, role labels mapped to carrier ids, the
    horizon the slice was cut at, and which family built it."""

    poset: Poset
    roles: Mapping[str, int]
    horizon: int
    family: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "roles", dict(self.roles))
        ids = sorted(self.roles.values())
        if ids != sorted(self.poset.carrier):
            raise AssertionError("roles are not a bijection onto the carrier")

    def id_of(self, role: str) -> int:
        return self.roles[role]


def _build(
    family: str,
    horizon: int,
    entries: Sequence[tuple[str, int]],
    rel: Iterable[tuple[int, int]],
) -> GadgetInstance:
    # entries come in id order; rel holds strict pairs as (lower id, upper id)
    ids = [i for _, i in entries]
    index = {i: k for k, i in enumerate(ids)}
    rows = [1 << k for k in range(len(ids))]
    for lo, hi in rel:
        rows[index[lo]] |= 1 << index[hi]
    P = validate(rows, ids, [name for name, _ in entries])
    return GadgetInstance(P, {name: i for name, i in entries}, horizon, family)


def _single_default_horizon(f: FnTable) -> int:
    return max(len(f), 1 + max(f.values, default=-1))


def g_range_strong(f: FnTable | Sequence[int], horizon: int | None = None) -> GadgetInstance:
    """Range encoding read off strong antichains.

    Three element families a_n, b_n, c_n for n below the horizon, with ids
    3n, 3n+1, 3n+2.  Both a_n and b_n sit below c_m exactly when f(m) = n,
    so a_n and b_n are compatible precisely for n in the range.  An empty
    table yields a bare antichain of the whole carrier.
    """
    f = _as_table(f)
    n_h = _single_default_horizon(f) if horizon is None else horizon
    entries = []
    for n in range(n_h):
        entries.append((f"a{n}", 3 * n))
        entries.append((f"b{n}", 3 * n + 1))
        entries.append((f"c{n}", 3 * n + 2))
    rel = []
    for m in range(min(len(f), n_h)):
        v = f(m)
        if v < n_h:
            rel.append((3 * v, 3 * m + 2))
            rel.append((3 * v + 1, 3 * m + 2))
    return _build("range-strong", n_h, entries, rel)


def decode_range_strong(inst: GadgetInstance, s: Iterable[int]) -> frozenset[int]:
    """Read the table's range out of a maximal strong antichain.

    Requires s to be a strong antichain that no carrier element can extend;
    the result is every n whose a or b element is missing from s.
    """
    P = inst.poset
    s = frozenset(s)
    if not is_strong_antichain(P, s):
        raise ValueError("input is not a strong antichain")
    for z in P.carrier:
        if z in s:
            continue
        if all(not compatible(P, z, x) for x in s):
            raise ValueError(f"strong antichain is not maximal; {z} extends it")
    out = set()
    for n in range(inst.horizon):
        if inst.roles[f"a{n}"] not in s or inst.roles[f"b{n}"] not in s:
            out.add(n)
    return frozenset(out)


def g_sep(
    f: FnTable | Sequence[int],
    g: FnTable | Sequence[int],
    horizon: int | None = None,
) -> GadgetInstance:
    """Two-table encoding read off a separating initial interval.

    c_n lies below a_m when f(m) = n and above b_m when g(m) = n, so any
    initial interval containing the a family and avoiding the b family must
    contain every c_n with n in f's range and no c_n with n in g's range.
    Table ranges must be disjoint.
    """
    f, g = _as_table(f), _as_table(g)
    _require_disjoint(f, g)
    n_h = max(_single_default_horizon(f), _single_default_horizon(g)) if horizon is None else horizon
    entries = []
    for n in range(n_h):
        entries.append((f"a{n}", 3 * n))
        entries.append((f"b{n}", 3 * n + 1))
        entries.append((f"c{n}", 3 * n + 2))
    rel = []
    for m in range(min(len(f), n_h)):
        if f(m) < n_h:
            rel.append((3 * f(m) + 2, 3 * m))
    for m in range(min(len(g), n_h)):
        if g(m) < n_h:
            rel.append((3 * m + 1, 3 * g(m) + 2))
    return _build("sep", n_h, entries, rel)


def decode_sep(inst: GadgetInstance, interval: Iterable[int]) -> frozenset[int]:
    """Read table membership out of a separating initial interval: the n
    whose c element landed inside."""
    P = inst.poset
    ival = frozenset(interval)
    if not is_initial_interval(P, ival):
        raise ValueError("input is not an initial interval")
    for n in range(inst.horizon):
        if inst.roles[f"a{n}"] not in ival:
            raise ValueError(f"interval misses a{n}; separation precondition fails")
        if inst.roles[f"b{n}"] in ival:
            raise ValueError(f"interval contains b{n}; separation precondition fails")
    return frozenset(
        n for n in range(inst.horizon) if inst.roles[f"c{n}"] in ival
    )


def g_two_chain(f: FnTable | Sequence[int], horizon: int | None = None) -> GadgetInstance:
    """Range encoding read off a two-part ideal cover.

    An antichain a_0..a_{N-1} all below a single top element c, plus a chain
    b_0 < ... < b_{N-1} with a_n below b_m exactly when the table hits n
    before stage m.  The maximal elements are c and the chain top, so the
    essential ideal cover has two parts and the chain part's a content is
    the recorded range.
    """
    f = _as_table(f)
    n_h = max(len(f) + 1, 1 + max(f.values, default=-1), 1) if horizon is None else horizon
    if n_h < 1:
        raise ValueError("horizon must be at least 1")
    entries = []
    for n in range(n_h):
        entries.append((f"a{n}", 2 * n))
        entries.append((f"b{n}", 2 * n + 1))
    entries.append(("c", 2 * n_h))
    rel = []
    for n in range(n_h):
        rel.append((2 * n, 2 * n_h))
        for m in range(n + 1, n_h):
            rel.append((2 * n + 1, 2 * m + 1))
    for m in range(n_h):
        hit = {f(i) for i in range(min(m, len(f)))}
        for n in hit:
            if n < n_h:
                rel.append((2 * n, 2 * m + 1))
    return _build("two-chain", n_h, entries, rel)


def _cover_parts(
    P: Poset, cover: IdealCover | Iterable[Iterable[int]]
) -> tuple[frozenset[int], ...]:
    parts = cover.parts if isinstance(cover, IdealCover) else tuple(cover)
    parts = tuple(frozenset(p) for p in parts)
    union: set[int] = set()
    for p in parts:
        if not is_ideal(P, p):
            raise ValueError("cover part is not an ideal")
        union |= p
    if union != P.carrier:
        raise ValueError("cover parts do not exhaust the carrier")
    for k, p in enumerate(parts):
        rest = set().union(*(q for j, q in enumerate(parts) if j != k)) if len(parts) > 1 else set()
        if p <= rest:
            raise ValueError("cover is not essential; a part is redundant")
    return parts


def _part_with_all(
    inst: GadgetInstance, parts: Sequence[frozenset[int]], role_ids: Sequence[int]
) -> frozenset[int]:
    hits = [p for p in parts if all(i in p for i in role_ids)]
    if not hits:
        raise ValueError("no cover part contains every chain element")
    if len(hits) > 1:
        raise ValueError("several cover parts contain the whole chain; ambiguous")
    return hits[0]


def decode_two_chain(
    inst: GadgetInstance, cover: IdealCover | Iterable[Iterable[int]]
) -> frozenset[int]:
    """Read the range out of an essential ideal cover: find the part holding
    the whole b chain and report which a elements it dragged in."""
    parts = _cover_parts(inst.poset, cover)
    b_ids = [inst.roles[f"b{n}"] for n in range(inst.horizon)]
    part = _part_with_all(inst, parts, b_ids)
    return frozenset(
        n for n in range(inst.horizon) if inst.roles[f"a{n}"] in part
    )


def g_truefalse(
    f: FnTable | Sequence[int],
    copies: bool = False,
    horizon: int | None = None,
) -> GadgetInstance:
    """Stage classification encoding: a_n sits below chain element b_m
    exactly when some stage in (n, m] takes a value below f(n), so a_n is
    bounded above by the chain iff stage n is false.

    With copies=True element a_n is replaced by n+1 incomparable copies
    a_n^0..a_n^n sharing its order role; the copies of the largest
    true-so-far stage then form a strong antichain of that size.
    """
    f = _as_table(f)
    n_h = len(f) if horizon is None else horizon
    if n_h > len(f):
        raise ValueError("horizon cannot exceed the table length")
    entries: list[tuple[str, int]] = []
    a_ids: list[list[int]] = []
    nxt = 0
    for n in range(n_h):
        ids_n = []
        if copies:
            for i in range(n + 1):
                entries.append((f"a{n}^{i}", nxt))
                ids_n.append(nxt)
                nxt += 1
        else:
            entries.append((f"a{n}", nxt))
            ids_n.append(nxt)
            nxt += 1
        entries.append((f"b{n}", nxt))
        a_ids.append(ids_n)
        nxt += 1
    rel = []
    b_of = [i for name, i in entries if name.startswith("b")]
    for n in range(n_h):
        for m in range(n + 1, n_h):
            rel.append((b_of[n], b_of[m]))
    for n in range(n_h):
        for m in range(n, n_h):
            if any(f(k) < f(n) for k in range(n + 1, m + 1)):
                for i in a_ids[n]:
                    rel.append((i, b_of[m]))
    return _build("truefalse", n_h, entries, rel)


def g_omega_omegastar(
    f: FnTable | Sequence[int], horizon: int | None = None
) -> GadgetInstance:
    """Stage classification with the a family pulled into a comparison web.

    For n < m the later element a_m sits above a_n when some intermediate
    stage drops below f(n), and below a_n when every intermediate stage
    stays above; injectivity makes those exhaustive, so the a family is a
    chain in comparison but ordered like a descending sequence stacked on
    an ascending one.  The b chain bounds exactly the false-stage a's.
    """
    f = _as_table(f)
    n_h = len(f) if horizon is None else horizon
    if n_h > len(f):
        raise ValueError("horizon cannot exceed the table length")
    entries = []
    for n in range(n_h):
        entries.append((f"a{n}", 2 * n))
        entries.append((f"b{n}", 2 * n + 1))
    rel = []
    for n in range(n_h):
        for m in range(n + 1, n_h):
            rel.append((2 * n + 1, 2 * m + 1))
            drop = any(f(k) < f(n) for k in range(n + 1, m + 1))
            if drop:
                rel.append((2 * n, 2 * m))
                rel.append((2 * n, 2 * m + 1))
            else:
                rel.append((2 * m, 2 * n))
    return _build("omega-omegastar", n_h, entries, rel)


def decode_wpo(
    inst: GadgetInstance, cover: IdealCover | Iterable[Iterable[int]]
) -> frozenset[int]:
    """Read the false stages out of an essential ideal cover of the
    comparison-web encoding: the a content of the part holding the b chain."""
    parts = _cover_parts(inst.poset, cover)
    if inst.horizon == 0:
        # empty encoding: the empty cover carries an empty read
        return frozenset()
    b_ids = [inst.roles[f"b{n}"] for n in range(inst.horizon)]
    part = _part_with_all(inst, parts, b_ids)
    return frozenset(
        n for n in range(inst.horizon) if inst.roles[f"a{n}"] in part
    )


def g_antichain_ext(
    f: FnTable | Sequence[int], horizon: int | None = None
) -> GadgetInstance:
    """Range encoding read off maximal antichain extension: b_m sits below
    a_n exactly when f(m) = n, so extending the b family to a maximal
    antichain must skip precisely the a's in the range."""
    f = _as_table(f)
    n_h = _single_default_horizon(f) if horizon is None else horizon
    entries = []
    for n in range(n_h):
        entries.append((f"a{n}", 2 * n))
        entries.append((f"b{n}", 2 * n + 1))
    rel = []
    for m in range(min(len(f), n_h)):
        if f(m) < n_h:
            rel.append((2 * m + 1, 2 * f(m)))
    return _build("antichain-ext", n_h, entries, rel)


def decode_ext(inst: GadgetInstance, e: Iterable[int]) -> frozenset[int]:
    """Read the range out of a maximal antichain extending the b family:
    the n whose a element was forced out."""
    P = inst.poset
    e = frozenset(e)
    if not is_antichain(P, e):
        raise ValueError("input is not an antichain")
    for n in range(inst.horizon):
        if inst.roles[f"b{n}"] not in e:
            raise ValueError(f"antichain does not contain b{n}")
    for z in P.carrier:
        if z not in e and all(not (P.leq(z, x) or P.leq(x, z)) for x in e):
            raise ValueError(f"antichain is not maximal; {z} extends it")
    return frozenset(
        n for n in range(inst.horizon) if inst.roles[f"a{n}"] not in e
    )


def g_wkl(
    f: FnTable | Sequence[int],
    g: FnTable | Sequence[int],
    horizon: int | None = None,
) -> GadgetInstance:
    """Two-table encoding whose initial intervals above an a tail pin down
    b membership.

    a_n sits below b_m exactly when m = g(n); b_k sits below a_n when the f
    table hits k before both n and g(n); and b_k sits below b_m when f hits
    k before it hits m.  Disjointness of the ranges is what keeps the three
    composition cases closed, and the axiom checker asserts exactly that.
    """
    f, g = _as_table(f), _as_table(g)
    _require_disjoint(f, g)
    if horizon is None:
        n_h = max(len(f), len(g), 1 + max((*f.values, *g.values), default=-1))
    else:
        n_h = horizon
    entries = []
    for n in range(n_h):
        entries.append((f"a{n}", 2 * n))
        entries.append((f"b{n}", 2 * n + 1))
    rel = []
    for n in range(min(len(g), n_h)):
        if g(n) < n_h:
            rel.append((2 * n, 2 * g(n) + 1))
        for i in range(min(n, g(n), len(f))):
            if f(i) < n_h:
                rel.append((2 * f(i) + 1, 2 * n))
    for m in range(n_h):
        for i in range(min(m, len(f))):
            k = f(i)
            if k < n_h and all(f(j) != m for j in range(i)):
                rel.append((2 * k + 1, 2 * m + 1))
    return _build("wkl", n_h, entries, rel)


def decode_wkl(
    inst: GadgetInstance, interval: Iterable[int]
) -> tuple[frozenset[int], int]:
    """Read b membership out of an initial interval containing a tail of
    the a family and nothing above any a element.

    Returns the decoded b index set together with the least tail start n0
    from which every a element lies inside.
    """
    P = inst.poset
    ival = frozenset(interval)
    if not is_initial_interval(P, ival):
        raise ValueError("input is not an initial interval")
    a_ids = [inst.roles[f"a{n}"] for n in range(inst.horizon)]
    n0 = inst.horizon
    while n0 > 0 and a_ids[n0 - 1] in ival:
        n0 -= 1
    if n0 == inst.horizon and inst.horizon > 0:
        raise ValueError("interval contains no tail of the a family")
    for z in ival:
        for a in a_ids:
            if P.lt(a, z):
                raise ValueError(f"interval contains {z}, strictly above an a element")
    decoded = frozenset(
        k for k in range(inst.horizon) if inst.roles[f"b{k}"] in ival
    )
    return decoded, n0


BUILDERS = {
    "range-strong": g_range_strong,
    "sep": g_sep,
    "two-chain": g_two_chain,
    "truefalse": g_truefalse,
    "omega-omegastar": g_omega_omegastar,
    "antichain-ext": g_antichain_ext,
    "wkl": g_wkl,
}

TWO_TABLE_FAMILIES = frozenset({"sep", "wkl"})


def kb_compare(s: Sequence[int], t: Sequence[int]) -> int:
    """Kleene-Brouwer comparison: -1 when s precedes t, 0 on equality, 1
    when t precedes s.  Proper extensions precede their prefixes; otherwise
    the first disagreement decides lexicographically."""
    for x, y in zip(s, t):
        if x != y:
            return -1 if x < y else 1
    if len(s) == len(t):
        return 0
    return -1 if len(s) > len(t) else 1


def _check_tree(tree: Iterable[Sequence[int]]) -> frozenset[tuple[int, ...]]:
    t = frozenset(tuple(s) for s in tree)
    for s in t:
        if s and s[:-1] not in t:
            raise ValueError(f"not prefix closed: {s[:-1]} missing")
    return t


def kb_decompose(
    tree: Iterable[Sequence[int]], path: Sequence[int]
) -> tuple[frozenset[tuple[int, ...]], tuple[frozenset[tuple[int, ...]], ...]]:
    """Split a finite tree along a path into comparison-defined layers.

    With d the path length, layer Y_n collects the nodes strictly between
    the length-(n+1) prefix and the length-n prefix in comparison order,
    the prefix itself included; X collects the nodes beyond every prefix
    that do not extend the path.  Together with the path extensions these
    partition the tree, and each layer agrees with its positional closed
    form: nodes branching right off the path at depth n, plus the prefix.
    """
    t = _check_tree(tree)
    path = tuple(path)
    d = len(path)
    for n in range(d + 1):
        if path[:n] not in t:
            raise ValueError(f"path prefix {path[:n]} is not in the tree")
    prefixes = [path[:n] for n in range(d + 1)]
    ext = frozenset(s for s in t if s[:d] == path)
    x = frozenset(
        s
        for s in t
        if s not in ext and all(kb_compare(s, p) < 0 for p in prefixes)
    )
    ys = []
    for n in range(d):
        layer = frozenset(
            s
            for s in t
            if kb_compare(prefixes[n + 1], s) < 0 and kb_compare(s, prefixes[n]) <= 0
        )
        closed = frozenset(
            s for s in t if len(s) > n and s[:n] == path[:n] and s[n] > path[n]
        ) | {prefixes[n]}
        if layer != closed:
            raise AssertionError(f"layer {n} disagrees with its closed form")
        ys.append(layer)
    blocks = [x, *ys, ext]
    total = 0
    seen: set[tuple[int, ...]] = set()
    for b in blocks:
        total += len(b)
        seen |= b
    if total != len(t) or seen != t:
        raise AssertionError("layers do not partition the tree")
    return x, tuple(ys)
