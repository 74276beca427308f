import random

import pytest

from cubemorph.btk_chains import (
    Signature,
    adjacent_chain_scan,
    chain_count,
    chain_element,
    chain_of,
    enumerate_partition,
    hausdorff_chain_distance,
    index_in_chain,
    mark,
    partition_covers_cube,
    signature,
    signature_distance,
)
from cubemorph.cube_core import Point, parse_point, weight


def test_mark_worked_example():
    m = mark(parse_point("01100110"))
    assert m.marked_positions() == (2, 3, 4, 5, 7, 8)
    assert m.unmarked_form() == "01"
    assert str(m) == "01̂1̂0̂0̂11̂0̂"


def test_mark_trivial_cases():
    assert mark(parse_point("0011")).marked_positions() == ()
    assert mark(parse_point("10")).marked_positions() == (1, 2)


def test_signature_examples():
    assert signature(parse_point("01100110")).text == "_1100_10"
    assert signature(parse_point("0011")).text == "____"
    assert signature(parse_point("10")).text == "10"


def test_signature_text_roundtrip():
    s = signature(parse_point("01100110"))
    assert Signature.from_text(s.text) == s
    with pytest.raises(ValueError):
        Signature.from_text("1_0")
    with pytest.raises(ValueError):
        Signature.from_text("01x")


def test_chain_of_examples():
    c = chain_of(parse_point("01100110"))
    assert [str(p) for p in c.elements()] == ["01100010", "01100110", "11100110"]
    assert [str(p) for p in chain_of(parse_point("10")).elements()] == ["10"]
    assert [str(p) for p in chain_of(parse_point("0011")).elements()] == [
        "0000", "0001", "0011", "0111", "1111"]


def test_chain_membership():
    c = chain_of(parse_point("01100110"))
    assert parse_point("11100110") in c
    assert parse_point("01100111") not in c


def test_chain_element_examples():
    s = signature(parse_point("01100110"))
    assert str(chain_element(s, 3)) == "01100010"
    assert str(chain_element(s, 5)) == "11100110"
    assert str(chain_element(signature(parse_point("10")), 1)) == "10"
    with pytest.raises(ValueError):
        chain_element(s, 2)
    with pytest.raises(ValueError):
        chain_element(s, 6)


def test_index_in_chain_examples():
    assert index_in_chain(parse_point("01100110")) == (3, 4)
    assert index_in_chain(parse_point("10")) == (1, 1)
    assert index_in_chain(parse_point("0011")) == (0, 2)


def test_partition_small_examples():
    assert [c.signature.text for c in enumerate_partition(1)] == ["_"]
    texts = {c.signature.text for c in enumerate_partition(2)}
    assert texts == {"__", "10"}
    assert sum(1 for _ in enumerate_partition(3)) == chain_count(3) == 3


def test_partition_covers_cube_small():
    for n in range(1, 11):
        chains, points = partition_covers_cube(n)
        assert chains == chain_count(n)
        assert points == 1 << n


def test_partition_streams_in_ascii_order():
    texts = [c.signature.text for c in enumerate_partition(4)]
    assert texts == sorted(texts)
    assert len(texts) == 6


def test_partition_cap():
    with pytest.raises(ValueError):
        next(enumerate_partition(25))


def test_order_invariance_of_signature():
    # the marking order must never change the signature
    rng = random.Random(20260810)
    for _ in range(1000):
        n = rng.randint(1, 20)
        x = Point(rng.getrandbits(n), n)
        base = mark(x).signature()
        for _ in range(10):
            seeded = mark(x, order_seed=rng.getrandbits(32)).signature()
            assert seeded == base


def test_marked_string_residue_shape():
    rng = random.Random(9)
    for _ in range(500):
        n = rng.randint(1, 18)
        m = mark(Point(rng.getrandbits(n), n))
        residue = m.unmarked_form()
        assert residue == "0" * residue.count("0") + "1" * residue.count("1")


def test_chain_shape_properties():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(1, 16)
        c = chain_of(Point(rng.getrandbits(n), n))
        elems = c.elements()
        k = c.signature.k
        assert len(elems) == c.signature.top - k + 1
        for j, p in enumerate(elems, start=k):
            assert weight(p) == j
        for a, b in zip(elems, elems[1:]):
            assert bin(a.bits ^ b.bits).count("1") == 1


def test_signature_distance_examples():
    x = parse_point("01100110")
    assert signature_distance(x, x) == 0
    assert signature_distance(x, parse_point("01100010")) == 0
    with pytest.raises(ValueError):
        signature_distance(x, parse_point("10"))


def test_hausdorff_examples():
    c = chain_of(parse_point("01100110"))
    assert hausdorff_chain_distance(c, c) == 0
    single = chain_of(parse_point("10"))
    big = chain_of(parse_point("00"))
    assert hausdorff_chain_distance(single, big) == 2
    assert hausdorff_chain_distance(big, single) == 2


def test_adjacent_chain_bounds_small():
    for n in range(1, 11):
        r = adjacent_chain_scan(n)
        assert r.edges == n << (n - 1)
        assert r.max_signature_distance <= 3
        assert r.max_level_gap <= 1
        assert r.max_cross_excess <= 6
        assert r.max_hausdorff <= 7


def test_case_split_generator():
    worst = 0
    for a in range(7):
        for b in range(7):
            for c in range(7):
                for d in range(7):
                    lo = parse_point("0" * a + "1" * b + "0" + "0" * c + "1" * d)
                    hi = parse_point("0" * a + "1" * b + "1" + "0" * c + "1" * d)
                    worst = max(worst, signature_distance(lo, hi))
    assert worst == 3


def test_canonical_signature_agrees_with_minimum_fill():
    # a signature is canonical exactly when re-marking its lowest chain
    # element reproduces it
    rng = random.Random(11)
    for _ in range(2000):
        n = rng.randint(1, 12)
        bits = mask = 0
        for i in range(n):
            c = rng.choice("01_")
            if c != "_":
                mask |= 1 << i
                if c == "1":
                    bits |= 1 << i
        if bin(mask).count("1") % 2:
            continue
        sig = Signature(bits, mask, n)
        expected = signature(Point(bits, n)) == sig
        assert sig.is_canonical() == expected
