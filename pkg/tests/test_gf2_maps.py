import random

import pytest

from cubemorph.cube_core import BooleanFunction, Point, parse_point
from cubemorph.gf2_maps import (
    SparseGF2Matrix,
    TreeLabeling,
    apply,
    build_tree_matrix,
    extract_even_bits,
    gf2_inverse_rows,
    gf2_rank,
    identity_matrix,
    prefix_xor_inverse,
    prefix_xor_map,
    prefix_xor_mapping,
    tree2_apply_bits,
    tree_apply_support,
    tree_inverse_apply,
    tree_inverse_bits,
    tree_inverse_support,
    tree_mapping,
    verify_conditions,
    xor_head_map,
    xor_head_mapping,
)
from cubemorph.stretch_metrics import is_mapping_between, stretch_report


def test_tree_matrix_examples():
    a = build_tree_matrix(3, 2)
    assert a.rows == ((1, 2, 3), (2,), (3,))
    assert build_tree_matrix(1, 2).rows == ((1,),)
    assert build_tree_matrix(7, 2).rows[1] == (2, 4, 5)


def test_tree_matrix_rejects_bad_arity():
    with pytest.raises(ValueError):
        build_tree_matrix(4, 1)


def test_tree_labeling():
    t = TreeLabeling(7, 2)
    assert t.parent(2) == t.parent(3) == 1
    assert t.parent(6) == 3
    assert list(t.children(2)) == [4, 5]
    assert t.height() == 2
    assert t.ancestors(7) == [7, 3, 1]


def test_apply_examples():
    a = build_tree_matrix(3, 2)
    assert str(apply(a, parse_point("100"))) == "100"
    assert str(apply(a, parse_point("010"))) == "110"
    assert apply(a, Point(0, 3)).bits == 0


def test_tree_inverse_examples():
    assert str(tree_inverse_apply(3, 2, parse_point("110"))) == "010"
    assert str(tree_inverse_apply(3, 2, parse_point("100"))) == "100"
    assert tree_inverse_apply(5, 2, Point(0, 5)).bits == 0


@pytest.mark.parametrize("n", range(1, 17))
def test_round_trip_exhaustive(n):
    for x in range(1 << n):
        assert tree_inverse_bits(n, 2, tree2_apply_bits(n, x)) == x


def test_round_trip_sparse_large():
    rng = random.Random(77)
    sizes = [1 << 17, 1 << 18, 1 << 19, 1 << 20]
    for i in range(100_000):
        n = sizes[i & 3]
        sup = frozenset(rng.sample(range(1, n + 1), k=rng.randint(1, 16)))
        assert tree_inverse_support(n, 2, tree_apply_support(n, 2, sup)) == sup


def test_fast_word_path_matches_generic():
    for n in (1, 2, 3, 5, 8, 11):
        a = build_tree_matrix(n, 2)
        for x in range(1 << n):
            assert tree2_apply_bits(n, x) == a.apply_bits(x)


def test_extract_even_bits_against_naive():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randint(1, 200)
        x = rng.getrandbits(n)
        naive = 0
        for i in range(0, n, 2):
            if (x >> i) & 1:
                naive |= 1 << (i // 2)
        assert extract_even_bits(x, n) == naive


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 12, 16])
def test_mapping_law_tree(n):
    assert is_mapping_between(tree_mapping(n), BooleanFunction.dictator(n),
                              BooleanFunction.xor(n))


@pytest.mark.parametrize("n", [1, 2, 5, 10, 14, 16])
def test_mapping_law_prefix_and_xorhead(n):
    dic, xor = BooleanFunction.dictator(n), BooleanFunction.xor(n)
    assert is_mapping_between(prefix_xor_mapping(n), dic, xor)
    assert is_mapping_between(xor_head_mapping(n), dic, xor)


def test_locality_row_weight():
    for n in (1, 2, 3, 17, 64, 1000):
        a = build_tree_matrix(n, 2)
        assert max(a.row_weights()) <= 3
        assert max(a.col_weights()) <= 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 9, 12, 16])
def test_tree_stretch_bounds(n):
    tm = tree_mapping(n)
    assert stretch_report(tm).max_stretch <= 2
    assert stretch_report(tm.inverse_mapping()).max_stretch <= n.bit_length()


def test_verify_conditions_examples():
    r = verify_conditions(build_tree_matrix(3, 2), cross_check=True)
    assert r.all_pass
    assert r.max_inverse_col_weight == 2
    assert r.method == "both"

    rid = verify_conditions(identity_matrix(4))
    assert rid.invertible
    assert not rid.parity_ok
    assert not rid.all_pass

    r15 = verify_conditions(build_tree_matrix(15, 2), cross_check=True)
    assert r15.all_pass
    assert r15.max_inverse_col_weight == 4


def test_structural_and_elimination_agree():
    for n in range(1, 130):
        verify_conditions(build_tree_matrix(n, 2), cross_check=True)
        verify_conditions(build_tree_matrix(n, 3), cross_check=True)


def test_arity_generalization():
    for arity in (2, 3, 4, 5):
        for n in (1, 2, 7, 50, 333, 2048):
            rep = verify_conditions(build_tree_matrix(n, arity))
            assert rep.all_pass
            assert rep.max_row_weight <= arity + 1
            height = 0
            while arity ** height < n:
                height += 1
            assert rep.max_inverse_col_weight <= height + 1


def test_gf2_rank_and_inverse():
    rows = [0b001, 0b011, 0b111]
    assert gf2_rank(rows, 3) == 3
    inv = gf2_inverse_rows(rows, 3)
    # multiply back: row i of A times the inverse must be e_i
    for i, r in enumerate(rows):
        out = 0
        for j in range(3):
            if (r >> j) & 1:
                out ^= inv[j]
        assert out == 1 << i
    assert gf2_inverse_rows([0b01, 0b01], 2) is None
    assert gf2_rank([0b01, 0b01], 2) == 1


def test_prefix_xor_examples():
    assert str(prefix_xor_map(parse_point("111"))) == "001"
    assert str(prefix_xor_map(parse_point("100"))) == "100"
    assert str(prefix_xor_inverse(parse_point("001"))) == "111"


def test_prefix_xor_inverse_flip_property():
    # flipping output coordinate k flips the first k input coordinates
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(1, 40)
        x = rng.getrandbits(n)
        y = prefix_xor_map(Point(x, n)).bits
        k = rng.randint(1, n)
        got = prefix_xor_inverse(Point(y ^ (1 << (k - 1)), n)).bits
        assert got == x ^ ((1 << k) - 1)


def test_xor_head_examples():
    assert str(xor_head_map(parse_point("100"))) == "100"
    assert str(xor_head_map(parse_point("110"))) == "010"
    assert str(xor_head_map(parse_point("011"))) == "011"


def test_xor_head_self_inverse():
    for n in (1, 2, 7):
        for x in range(1 << n):
            p = Point(x, n)
            assert xor_head_map(xor_head_map(p)) == p


def test_matrix_text_export():
    assert build_tree_matrix(3, 2).to_text() == "1 2 3\n2\n3"


def test_sparse_matrix_validation():
    with pytest.raises(ValueError):
        SparseGF2Matrix(2, ((1,),))
    with pytest.raises(ValueError):
        SparseGF2Matrix(2, ((2, 1), (2,)))
    with pytest.raises(ValueError):
        SparseGF2Matrix(2, ((1, 3), (2,)))


def test_dimension_mismatch_errors():
    a = build_tree_matrix(3, 2)
    with pytest.raises(ValueError):
        apply(a, parse_point("10"))
    with pytest.raises(ValueError):
        tree_inverse_apply(3, 2, parse_point("1010"))
