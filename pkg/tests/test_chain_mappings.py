import numpy as np
import pytest

from cubemorph.chain_mappings import (
    dict_to_maj,
    maj_to_dict,
    maj_to_xor,
    majority_to_dictator_map,
    majority_to_xor_map,
)
from cubemorph.cube_core import BooleanFunction, Point, parse_point, popcount_array
from cubemorph.stretch_metrics import is_mapping_between, stretch_report

# the full 6-point block of the n=3 chain {00, 01, 11}
EXAMPLE_BLOCK = [
    ("111", "111"),
    ("110", "101"),
    ("011", "100"),
    ("010", "000"),
    ("001", "001"),
    ("000", "011"),
]


@pytest.mark.parametrize("src,img", EXAMPLE_BLOCK)
def test_example_block_forward(src, img):
    assert str(maj_to_dict(parse_point(src))) == img


@pytest.mark.parametrize("src,img", EXAMPLE_BLOCK)
def test_example_block_inverse(src, img):
    assert str(dict_to_maj(parse_point(img))) == src


def test_even_n_rejected():
    with pytest.raises(ValueError):
        maj_to_dict(parse_point("1100"))
    with pytest.raises(ValueError):
        dict_to_maj(parse_point("11"))
    with pytest.raises(ValueError):
        maj_to_xor(parse_point("101010"))


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11])
def test_function_mapping_law(n):
    phi = majority_to_dictator_map(n)
    assert is_mapping_between(phi, BooleanFunction.majority(n),
                              BooleanFunction.dictator(n))


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11])
def test_two_sided_inverse(n):
    table = majority_to_dictator_map(n).table()
    for x in range(1 << n):
        y = int(table[x])
        assert dict_to_maj(Point(y, n)).bits == x
        assert maj_to_dict(Point(x, n)).bits == y


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13])
def test_lipschitz_bound(n):
    rep = stretch_report(majority_to_dictator_map(n))
    assert rep.max_stretch <= 11


def test_half_cube_respect():
    for n in (3, 5, 9):
        t = majority_to_dictator_map(n).table()
        w = popcount_array(np.arange(1 << n, dtype=np.uint64))
        assert bool((((t & 1) == 1) == (w >= (n + 1) // 2)).all())


def test_maj_to_xor_examples():
    assert str(maj_to_xor(parse_point("111"))) == "001"
    assert str(maj_to_xor(parse_point("010"))) == "000"
    assert str(maj_to_xor(parse_point("001"))) == "011"


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9])
def test_composition_law_and_bound(n):
    phi = majority_to_xor_map(n)
    assert is_mapping_between(phi, BooleanFunction.majority(n), BooleanFunction.xor(n))
    assert stretch_report(phi).max_stretch <= 22
    table = phi.table()
    for x in range(1 << n):
        assert phi.inverse_bits(int(table[x])) == x
