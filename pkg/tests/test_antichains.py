import random

import pytest

from downsets.antichains import (
    extend_maximal_antichain,
    extend_maximal_strong_antichain,
    is_antichain,
    is_strong_antichain,
    max_strong_antichain,
    refine_cone,
)
from downsets.generators import antichain, chain, random_poset
from downsets.poset import from_covers

import oracles


def test_antichain_detection_on_stock_posets():
    A, C = antichain(4), chain(4)
    assert is_antichain(A, A.carrier)
    assert not is_antichain(C, C.carrier)
    assert is_antichain(C, [2])
    assert is_antichain(C, [])


def test_strong_antichain_agrees_with_common_upper_oracle():
    rng = random.Random(3)
    for _ in range(40):
        P = random_poset(6, rng)
        for s in oracles.subsets(sorted(P.carrier)):
            assert is_strong_antichain(P, s) == oracles.brute_is_strong_antichain(P, s)


def test_strong_implies_plain_antichain():
    rng = random.Random(9)
    for _ in range(30):
        P = random_poset(7, rng)
        for s in oracles.subsets(sorted(P.carrier)):
            if is_strong_antichain(P, s):
                assert is_antichain(P, s)


def test_extension_returns_maximal_superset():
    rng = random.Random(17)
    for _ in range(40):
        P = random_poset(7, rng)
        e = extend_maximal_antichain(P, [])
        assert is_antichain(P, e)
        for z in P.carrier - e:
            assert not is_antichain(P, e | {z})
        s = extend_maximal_strong_antichain(P, [])
        assert is_strong_antichain(P, s)
        for z in P.carrier - s:
            assert not is_strong_antichain(P, s | {z})


def test_extension_keeps_seed():
    P = chain(5)
    assert extend_maximal_antichain(P, [2]) == {2}
    assert extend_maximal_strong_antichain(P, [4]) == {4}


def test_extension_rejects_bad_seed():
    P = chain(3)
    with pytest.raises(ValueError):
        extend_maximal_antichain(P, [0, 1])
    with pytest.raises(ValueError):
        extend_maximal_strong_antichain(P, [0, 2])


def test_max_strong_antichain_matches_subset_search_and_maximal_count():
    rng = random.Random(23)
    for _ in range(60):
        P = random_poset(rng.randint(1, 7), rng)
        got = max_strong_antichain(P)
        assert got.size == oracles.brute_max_strong_antichain(P)
        assert got.size == P.maximal_mask().bit_count()
        assert is_strong_antichain(P, got.witness)
        assert len(got.witness) == got.size


def two_fans():
    # two roots, three private leaves above each
    covers = [(0, i) for i in range(2, 5)] + [(1, i) for i in range(5, 8)]
    return from_covers(8, covers)


def test_refine_cone_pigeonholes_into_one_up_cone():
    P = two_fans()
    got = refine_cone(P, [0, 1], range(2, 8), 3)
    assert got.root in (0, 1)
    assert len(got.fan) >= 3
    for v in got.fan:
        assert P.leq(got.root, v)


def test_refine_cone_requires_matching_size():
    P = two_fans()
    with pytest.raises(ValueError):
        refine_cone(P, [0, 1], range(2, 7), 3)


def test_refine_cone_skips_roots_with_thin_buckets():
    # root 0 collects only two members of t, so the pigeonhole must land on root 1
    covers = [(0, 2), (0, 3)] + [(1, i) for i in range(4, 8)]
    P = from_covers(8, covers)
    got = refine_cone(P, [0, 1], range(2, 8), 3)
    assert got.root == 1
    assert len(got.fan) >= 3
