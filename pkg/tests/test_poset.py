import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from downsets.generators import antichain, chain, n_poset, random_poset, v_poset
from downsets.io import (
    DocumentError,
    dump_poset,
    load_poset,
    poset_from_document,
    poset_to_document,
    to_dot,
)
from downsets.poset import (
    CarrierError,
    OrderViolationError,
    Poset,
    cones,
    compatible,
    density_defect,
    down_closure,
    from_covers,
    is_initial_interval,
    lex_sum,
    restrict,
    validate,
)

import oracles


def build(n, pairs, ids=None, labels=None):
    rows = [1 << i for i in range(n)]
    index = {x: i for i, x in enumerate(ids or range(n))}
    for a, b in pairs:
        rows[index[a]] |= 1 << index[b]
    return validate(rows, ids, labels)


def test_validate_accepts_chain():
    P = chain(4)
    assert P.n == 4
    assert P.leq(0, 3) and not P.leq(3, 0)
    assert P.lt(0, 1) and not P.lt(1, 1)


def test_validate_reports_least_reflexivity_witness():
    rows = [0b01, 0b10]
    rows[1] = 0b00  # drop 1<=1
    with pytest.raises(OrderViolationError) as exc:
        validate(rows)
    assert exc.value.axiom == "reflexivity"
    assert exc.value.witness == (1,)


def test_validate_reports_antisymmetry_pair():
    with pytest.raises(OrderViolationError) as exc:
        validate([0b11, 0b11])
    assert exc.value.axiom == "antisymmetry"
    assert exc.value.witness == (0, 1)


def test_validate_reports_transitivity_triple():
    # 0<=1, 1<=2, missing 0<=2
    rows = [0b011, 0b110, 0b100]
    with pytest.raises(OrderViolationError) as exc:
        validate(rows)
    assert exc.value.axiom == "transitivity"
    assert exc.value.witness == (0, 1, 2)


def test_ids_must_increase():
    with pytest.raises(ValueError):
        validate([0b01, 0b10], ids=[3, 1])


def test_from_covers_closes():
    P = from_covers(3, [(0, 1), (1, 2)])
    assert P.leq(0, 2)


def test_index_and_membership_by_id():
    P = build(2, [(3, 9)], ids=[3, 9])
    assert 3 in P and 9 in P and 5 not in P
    with pytest.raises(CarrierError):
        P.index(5)


def test_cones_partition_carrier():
    P = n_poset()
    for x in P.carrier:
        c = cones(P, x)
        everything = c.strict_up | c.strict_down | c.incomparable | {x}
        assert everything == P.carrier
        assert x in c.up and x in c.down


def test_compatibility_matches_common_upper_search():
    rng = random.Random(5)
    for _ in range(30):
        P = random_poset(6, rng)
        for x in P.carrier:
            for y in P.carrier:
                assert compatible(P, x, y) == oracles.has_common_upper(P, x, y)


def test_initial_interval_detection_matches_brute():
    rng = random.Random(7)
    for _ in range(20):
        P = random_poset(5, rng)
        for s in oracles.subsets(sorted(P.carrier)):
            assert is_initial_interval(P, s) == oracles.is_downset(P, s)


def test_down_closure_is_least_interval_containing_seed():
    rng = random.Random(11)
    for _ in range(20):
        P = random_poset(6, rng)
        xs = [x for x in P.carrier if rng.random() < 0.4]
        d = down_closure(P, xs)
        assert is_initial_interval(P, d)
        assert set(xs) <= d
        for s in oracles.brute_intervals(P):
            if set(xs) <= s:
                assert d <= s


def test_restrict_keeps_ids_and_relation():
    P = build(4, [(0, 2), (1, 2), (2, 3), (0, 3), (1, 3)])
    Q = restrict(P, [0, 1, 3])
    assert Q.ids == (0, 1, 3)
    assert Q.leq(0, 3) and Q.leq(1, 3) and not Q.leq(0, 1)


def test_lex_sum_of_chains_is_chain():
    base = chain(2)
    total = lex_sum(base, {0: chain(2), 1: chain(3)})
    assert total.n == 5
    assert oracles.brute_interval_count(total) == 6


def test_density_defect_zero_on_dense_pair():
    P = chain(3)
    assert density_defect(P, [0, 2]) >= 0


def test_document_roundtrip_preserves_everything():
    P = build(3, [(1, 5), (5, 9), (1, 9)], ids=[1, 5, 9], labels=["lo", "mid", "hi"])
    doc = poset_to_document(P)
    Q = poset_from_document(doc)
    assert Q.ids == P.ids and Q.up == P.up and Q.labels == P.labels


def test_document_rejects_duplicate_ids():
    with pytest.raises(DocumentError):
        poset_from_document({"elements": [{"id": 1}, {"id": 1}], "leq": []})


def test_document_rejects_unknown_pair_ids():
    with pytest.raises(DocumentError):
        poset_from_document({"elements": [{"id": 0}], "leq": [[0, 4]]})


def test_document_closed_relation_not_repaired():
    doc = {"elements": [{"id": i} for i in range(3)], "leq": [[0, 0], [1, 1], [2, 2], [0, 1], [1, 2]]}
    with pytest.raises(OrderViolationError):
        poset_from_document(doc)


def test_document_ignores_extra_top_level_keys():
    doc = {"elements": [{"id": 0}], "leq": [[0, 0]], "gadget": {"family": "x"}}
    assert poset_from_document(doc).n == 1


def test_dump_load_identity():
    P = v_poset()
    assert load_poset(dump_poset(P)).up == P.up


def test_dot_output_lists_cover_edges_only():
    txt = to_dot(chain(3))
    assert "n0 -> n1" in txt and "n1 -> n2" in txt and "n0 -> n2" not in txt


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1), st.integers(min_value=1, max_value=7))
def test_random_posets_always_validate(seed, n):
    P = random_poset(n, random.Random(seed))
    # construction went through validate already; spot-check transitivity
    for x in P.carrier:
        for y in P.carrier:
            for z in P.carrier:
                if P.leq(x, y) and P.leq(y, z):
                    assert P.leq(x, z)


def test_antichain_has_full_powerset_of_intervals():
    assert oracles.brute_interval_count(antichain(4)) == 16
